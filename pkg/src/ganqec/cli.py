"""Command-line interface.

Subcommands: ``sweep`` (logical-fidelity Monte Carlo), ``threshold``
(curve-crossing estimate from a sweep CSV), ``dataset`` (training data),
``teleport`` (fidelity experiment) and ``verify-weights`` (golden-vector
replay). Grids accept either comma lists (``3,5``) or inclusive ranges
(``start:stop:step``). The seed is recorded in every output file.
"""

from __future__ import annotations

import argparse
import sys

from .dataset import generate_dataset, write_dataset
from .exceptions import GanqecError
from .lattice import build_layout
from .sweeps import estimate_threshold, read_sweep_csv, sweep, sweep_to_csv
from .teleport import run_fidelity_experiment
from .weights_io import read_weights


def parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def parse_float_grid(text: str) -> list[float]:
    if ":" in text:
        start_s, stop_s, step_s = text.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
        if step <= 0:
            raise ValueError(f"grid step must be positive in {text!r}")
        values = []
        k = 0
        while True:
            v = start + k * step
            if v > stop + step * 1e-9:
                break
            values.append(round(v, 12))
            k += 1
        return values
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _load_weights(path):
    if path is None:
        raise SystemExit("--weights is required for the gan decoder")
    return read_weights(path)


def _cmd_sweep(args) -> int:
    weights = _load_weights(args.weights) if args.decoder == "gan" else None
    result = sweep(
        ds=parse_int_list(args.d),
        ps=parse_float_grid(args.p),
        trials=args.trials,
        decoder=args.decoder,
        seed=args.seed,
        weights=weights,
    )
    sweep_to_csv(result, args.out)
    for pt in result.points:
        print(f"d={pt.d} p={pt.p:.6g} fidelity={pt.fidelity:.6f} "
              f"[{pt.wilson_low:.6f}, {pt.wilson_high:.6f}] ({pt.failures}/{pt.trials} failures)")
    print(f"wrote {args.out}")
    return 0


def _cmd_threshold(args) -> int:
    result = read_sweep_csv(args.infile)
    d_low, d_high = args.d
    est = estimate_threshold(result, d_low, d_high)
    print(f"threshold estimate p = {est.p:.6g} "
          f"(bracket [{est.bracket_low:.6g}, {est.bracket_high:.6g}])")
    return 0


def _cmd_dataset(args) -> int:
    layout = build_layout(args.d)
    records = generate_dataset(layout, args.p, args.count, args.target, args.seed)
    write_dataset(args.out, layout, args.p, records)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_teleport(args) -> int:
    layout = build_layout(args.d)
    weights = _load_weights(args.weights) if args.decoder == "gan" else None
    run = run_fidelity_experiment(
        layout,
        rates=parse_float_grid(args.rates),
        shots=args.shots,
        repeats=args.repeats,
        decoder=args.decoder,
        seed=args.seed,
        weights=weights,
    )
    cols = ("rate", "batch_id", "failures", "shots",
            "fidelity_optimized", "fidelity_baseline", "decoder", "d", "seed")
    lines = [",".join(cols)]
    for row in run.rows:
        lines.append(",".join([
            f"{row.rate:.12g}", str(row.batch_id), str(row.failures), str(row.shots),
            f"{row.fidelity_optimized:.12g}", f"{row.fidelity_baseline:.12g}",
            run.decoder, str(run.d), str(run.seed),
        ]))
    with open(args.out, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    for rate in run.rates():
        print(f"rate={rate:.6g} mean_failures={run.mean_failures(rate):.3f} / {run.shots}")
    print(f"wrote {args.out}")
    return 0


def _cmd_verify_weights(args) -> int:
    from .gan_decoder import verify_golden

    weights = read_weights(args.weights)
    golden = read_weights(args.golden)
    worst_name, worst_rel, n_cases = verify_golden(weights, golden, tol=args.tol)
    status = "PASS" if worst_rel <= args.tol else "FAIL"
    print(f"{status}: {n_cases} golden case(s), worst relative error "
          f"{worst_rel:.3g} at {worst_name or 'n/a'} (tolerance {args.tol:g})")
    return 0 if worst_rel <= args.tol else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="ganqec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="logical fidelity Monte Carlo sweep")
    p_sweep.add_argument("--d", required=True, help="code distances, e.g. 3,5")
    p_sweep.add_argument("--p", required=True, help="error rates, list or start:stop:step")
    p_sweep.add_argument("--trials", type=int, default=100000)
    p_sweep.add_argument("--decoder", choices=("mwpm", "gan", "none"), default="mwpm")
    p_sweep.add_argument("--weights", default=None)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--out", required=True)
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_thr = sub.add_parser("threshold", help="curve-crossing threshold from a sweep CSV")
    p_thr.add_argument("--in", dest="infile", required=True)
    p_thr.add_argument("--d", type=int, nargs=2, required=True, metavar=("D_LOW", "D_HIGH"))
    p_thr.set_defaults(fn=_cmd_threshold)

    p_ds = sub.add_parser("dataset", help="generate a training dataset")
    p_ds.add_argument("--d", type=int, required=True)
    p_ds.add_argument("--p", type=float, required=True)
    p_ds.add_argument("--count", type=int, required=True)
    p_ds.add_argument("--target", choices=("ml", "mwpm"), default="ml")
    p_ds.add_argument("--seed", type=int, default=0)
    p_ds.add_argument("--out", required=True)
    p_ds.set_defaults(fn=_cmd_dataset)

    p_tp = sub.add_parser("teleport", help="teleportation fidelity experiment")
    p_tp.add_argument("--d", type=int, required=True)
    p_tp.add_argument("--rates", required=True, help="gate error rates, list or start:stop:step")
    p_tp.add_argument("--shots", type=int, default=1024)
    p_tp.add_argument("--repeats", type=int, default=5)
    p_tp.add_argument("--decoder", choices=("mwpm", "gan", "none"), default="mwpm")
    p_tp.add_argument("--weights", default=None)
    p_tp.add_argument("--seed", type=int, default=0)
    p_tp.add_argument("--out", required=True)
    p_tp.set_defaults(fn=_cmd_teleport)

    p_vw = sub.add_parser("verify-weights", help="replay golden vectors against a weight file")
    p_vw.add_argument("--weights", required=True)
    p_vw.add_argument("--golden", required=True)
    p_vw.add_argument("--tol", type=float, default=1e-4)
    p_vw.set_defaults(fn=_cmd_verify_weights)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GanqecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
