"""Training entry point: reads a GQDS dataset, trains the GAN, exports
weights, golden vectors and the loss/FID log."""

from __future__ import annotations

import argparse
import sys

from .export import emit_golden_vectors, write_discriminator, write_generator
from .train import TrainConfig, train, write_log_csv


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="ganqec-train", description=__doc__)
    parser.add_argument("--dataset", required=True, help="GQDS training dataset")
    parser.add_argument("--out-weights", required=True, help="generator GQWT output")
    parser.add_argument("--out-discriminator", default=None)
    parser.add_argument("--out-golden", default=None, help="golden-vector GQWT output")
    parser.add_argument("--out-log", default=None, help="loss/FID CSV")
    parser.add_argument("--iterations", type=int, default=None,
                        help="default: 500 at d=3, 1800 at d=5")
    parser.add_argument("--learning-rate", type=float, default=0.002)
    parser.add_argument("--batch-size", type=int, default=4)
    parser.add_argument("--flip-prob", type=float, default=0.25)
    parser.add_argument("--fid-every", type=int, default=50)
    parser.add_argument("--golden-count", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--run-id", default=None)
    parser.add_argument("--export", choices=("best", "final"), default="best",
                        help="ship the lowest-FID checkpoint (default) or the final state")
    args = parser.parse_args(argv)

    config = TrainConfig(
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        flip_prob=args.flip_prob,
        iterations=args.iterations,
        seed=args.seed,
        fid_every=args.fid_every,
    )
    result = train(args.dataset, config, progress=print)
    run_id = args.run_id or f"train-seed{args.seed}"
    shipped = result.generator
    if args.export == "best" and result.best_generator is not None:
        shipped = result.best_generator
        run_id += f"-best{result.best_iteration}"
        print(f"shipping best checkpoint: iteration {result.best_iteration} "
              f"(FID {result.best_fid:.5f})")
    write_generator(args.out_weights, shipped, result.d, run_id)
    print(f"wrote generator weights to {args.out_weights} "
          f"({result.wall_seconds:.0f}s of training)")
    if args.out_discriminator:
        write_discriminator(args.out_discriminator, result.discriminator, result.d, run_id)
        print(f"wrote discriminator weights to {args.out_discriminator}")
    if args.out_golden:
        emit_golden_vectors(args.out_golden, shipped, args.golden_count,
                            seed=args.seed + 1, d=result.d, run_id=run_id)
        print(f"wrote {args.golden_count} golden case(s) to {args.out_golden}")
    if args.out_log:
        write_log_csv(args.out_log, result)
        print(f"wrote training log to {args.out_log}")
    if result.fid_reports:
        first, last = result.fid_reports[0], result.fid_reports[-1]
        print(f"FID: {first.value:.4f} (iter {first.iteration}) -> "
              f"{last.value:.4f} (iter {last.iteration}) [{last.extractor}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
