"""Pauli-frame simulation of surface-code-protected teleportation.

One shot teleports all ``2*d*d`` data qubits of a code block, each through
its own EPR pair, with depolarizing noise at rate ``gate_p`` after every
protocol step that touches a qubit: EPR preparation (A and B), the CNOT
(C and A), the Hadamard (C), the measurement readout (C and A, applied as
pre-readout noise), and the recovery gate (B). All gates are Clifford and
all noise is Pauli, so the block state is tracked exactly as one (x, z)
frame bit pair per qubit.

Propagating each injection through the remaining circuit and the
outcome-conditioned recovery leaves, per qubit::

    flip of A's outcome  fa = x_in + xA_epr + xA_cnot + xA_meas
    flip of C's outcome  fc = z_in + zA_epr + zC_cnot + xC_h + xC_meas
    output frame         x_out = fa + xB_epr + xB_rec
                         z_out = fc + zB_epr + zB_rec

(all sums mod 2; Z components on a measured qubit and X on C between CNOT
and H drop out). With no noise the input frame reappears on B unchanged
and the four outcome pairs are uniform. The statevector oracle in the
tests verifies every line of this table.

The received block's frames are then decoded per species: vertex checks
catch the x pattern directly, face checks catch the z pattern through the
dual-lattice re-indexing. A shot succeeds when both species end trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _batch
from .gan_decoder import CachedGanDecoder
from .homology import judge
from .lattice import ToricLayout, to_dual
from .mwpm import DP_LIMIT, decode_mwpm
from .noise import NoiseConfig
from .rng import uniforms
from .syndrome import compute_syndrome, compute_syndromes_batch
from .weights_io import ModelWeights

RECOVERY_GATES = ("I", "X", "Z", "Y")

# draw layout per teleported qubit, 10 uniforms per qubit per shot
_D_EPR_A, _D_EPR_B, _D_CNOT_C, _D_CNOT_A, _D_H_C, _D_MEAS_C, _D_MEAS_A, _D_REC_B, _D_MU1, _D_MU2 = range(10)

DECODERS = ("mwpm", "gan", "none")


def recovery_gate(m1: int, m2: int) -> str:
    """Recovery applied by the receiver for outcome pair (m1, m2)."""
    if m1 not in (0, 1) or m2 not in (0, 1):
        raise ValueError(f"outcome bits must be 0/1, got ({m1}, {m2})")
    return RECOVERY_GATES[2 * m1 + m2]


def species_marginal_rates(gate_p: float) -> tuple[float, float]:
    """Per-qubit marginal error rates of the two frame species.

    The x frame XORs 5 independent depolarizing draws (x components, each
    set with probability 2*gate_p/3), the z frame 6, so the marginals follow
    the parity of independent Bernoullis.
    """
    q = 2.0 * gate_p / 3.0
    px = 0.5 * (1.0 - (1.0 - 2.0 * q) ** 5)
    pz = 0.5 * (1.0 - (1.0 - 2.0 * q) ** 6)
    return px, pz


def teleport_frames(
    layout: ToricLayout,
    gate_p: float,
    seed: int,
    first_shot: int,
    n_shots: int,
    x_in: np.ndarray | None = None,
    z_in: np.ndarray | None = None,
):
    """Frames and outcomes for shots ``[first_shot, first_shot + n_shots)``.

    Shot ``s`` uses stream ``s``; qubit ``q`` consumes draws
    ``[10q, 10q + 10)`` so the layout is independent of the decoder. Returns
    (x_out, z_out, m1, m2), each of shape (n_shots, 2*d*d) uint8. Optional
    ``x_in``/``z_in`` inject a pre-teleportation frame on the data qubits.
    """
    if not 0.0 <= gate_p < 1.0:
        raise ValueError(f"gate_p must be in [0, 1), got {gate_p}")
    n_q = layout.n_edges
    streams = np.arange(first_shot, first_shot + n_shots, dtype=np.uint64)
    u = uniforms(seed, streams, 10 * n_q).reshape(n_shots, n_q, 10)

    def depol(col):
        x = (u[:, :, col] < 2.0 * gate_p / 3.0)
        z = (u[:, :, col] >= gate_p / 3.0) & (u[:, :, col] < gate_p)
        return x.astype(np.uint8), z.astype(np.uint8)

    xa0, za0 = depol(_D_EPR_A)
    xb0, zb0 = depol(_D_EPR_B)
    _, z1c = depol(_D_CNOT_C)
    x1a, _ = depol(_D_CNOT_A)
    x2c, _ = depol(_D_H_C)
    x3c, _ = depol(_D_MEAS_C)
    x3a, _ = depol(_D_MEAS_A)
    x4b, z4b = depol(_D_REC_B)

    fa = xa0 ^ x1a ^ x3a
    fc = za0 ^ z1c ^ x2c ^ x3c
    if x_in is not None:
        fa = fa ^ np.asarray(x_in, dtype=np.uint8)
    if z_in is not None:
        fc = fc ^ np.asarray(z_in, dtype=np.uint8)

    mu1 = (u[:, :, _D_MU1] < 0.5).astype(np.uint8)
    mu2 = (u[:, :, _D_MU2] < 0.5).astype(np.uint8)
    m1 = mu1 ^ fc
    m2 = mu2 ^ fa

    x_out = fa ^ xb0 ^ x4b
    z_out = fc ^ zb0 ^ z4b
    return x_out, z_out, m1, m2


def _species_failures(layout, patterns, decoder, weights, gan_p, threads_limit=DP_LIMIT):
    """Per-shot failure bits for one species already expressed on the primal
    lattice indexing."""
    syndromes = compute_syndromes_batch(layout, patterns)
    if decoder == "none":
        residual_w = _batch.windings_of_rows(patterns, layout.cut_h, layout.cut_v)
        nonzero_syndrome = syndromes.any(axis=1)
        return (nonzero_syndrome | (residual_w.any(axis=1))).astype(np.uint8)
    if decoder == "mwpm":
        fail, overflow = _batch.decode_batch_mwpm(
            layout.d, syndromes, patterns, layout.cut_h, layout.cut_v, threads_limit
        )
        for t in np.flatnonzero(overflow):
            outcome = decode_mwpm(layout, syndromes[t], error=patterns[t])
            fail[t] = 0 if outcome.success else 1
        return fail
    if decoder == "gan":
        cached = CachedGanDecoder(layout, weights, gan_p)
        fail = np.zeros(len(patterns), np.uint8)
        for t in range(len(patterns)):
            correction = cached(syndromes[t])
            outcome = judge(layout, patterns[t], correction)
            fail[t] = 0 if outcome.success else 1
        return fail
    raise ValueError(f"unknown decoder {decoder!r}")


def run_teleport_batch(
    layout: ToricLayout,
    gate_p: float,
    decoder: str,
    seed: int,
    first_shot: int,
    n_shots: int,
    weights: ModelWeights | None = None,
):
    """Simulate a batch of shots; returns (failures, baseline_failures, m1, m2).

    ``failures`` counts shots where either species decoded to a nontrivial
    class; ``baseline_failures`` judges the same frames with no correction.
    """
    if decoder not in DECODERS:
        raise ValueError(f"decoder must be one of {DECODERS}, got {decoder!r}")
    if decoder == "gan" and weights is None:
        raise ValueError("gan decoder needs weights")
    try:
        import numba

        from .sweeps import resolve_threads

        numba.set_num_threads(resolve_threads())
    except (ImportError, ValueError):
        pass
    x_out, z_out, m1, m2 = teleport_frames(layout, gate_p, seed, first_shot, n_shots)
    z_dual = z_out[:, layout.dual_to_primal]

    px, pz = species_marginal_rates(gate_p)
    fail_x = _species_failures(layout, x_out, decoder, weights, px)
    fail_z = _species_failures(layout, z_dual, decoder, weights, pz)
    fail = (fail_x | fail_z).astype(np.uint8)

    base_x = _species_failures(layout, x_out, "none", None, px)
    base_z = _species_failures(layout, z_dual, "none", None, pz)
    base = (base_x | base_z).astype(np.uint8)
    return int(fail.sum()), int(base.sum()), m1, m2


@dataclass
class ShotResult:
    outcomes: np.ndarray          # (n_qubits, 2) measurement pairs
    recoveries: list[str]         # per-qubit recovery gate
    x_pattern: np.ndarray
    z_pattern: np.ndarray
    x_success: bool
    z_success: bool

    @property
    def success(self) -> bool:
        return self.x_success and self.z_success


def teleport_block(
    layout: ToricLayout,
    noise: NoiseConfig,
    decoder: str,
    shot_index: int = 0,
    weights: ModelWeights | None = None,
) -> ShotResult:
    """Single-shot wrapper with full per-shot detail; the shot stream is
    keyed by (noise.seed, shot_index) and noise strength is noise.gate_p."""
    gate_p = noise.gate_p
    x_out, z_out, m1, m2 = teleport_frames(layout, gate_p, noise.seed, shot_index, 1)
    x_pattern, z_pattern = x_out[0], z_out[0]
    outcomes = np.stack([m1[0], m2[0]], axis=1)
    recoveries = [recovery_gate(int(a), int(b)) for a, b in outcomes]

    px, pz = species_marginal_rates(gate_p)

    def species_ok(pattern, gan_p):
        syndrome = compute_syndrome(layout, pattern)
        if decoder == "none":
            correction = layout.empty_pattern()
        elif decoder == "mwpm":
            correction = decode_mwpm(layout, syndrome).correction
        elif decoder == "gan":
            if weights is None:
                raise ValueError("gan decoder needs weights")
            correction = CachedGanDecoder(layout, weights, gan_p)(syndrome)
        else:
            raise ValueError(f"unknown decoder {decoder!r}")
        return bool(judge(layout, pattern, correction).success)

    x_ok = species_ok(x_pattern, px)
    z_ok = species_ok(to_dual(layout, z_pattern), pz)
    return ShotResult(
        outcomes=outcomes,
        recoveries=recoveries,
        x_pattern=x_pattern,
        z_pattern=z_pattern,
        x_success=x_ok,
        z_success=z_ok,
    )


@dataclass
class TeleportBatchRow:
    rate: float
    batch_id: int
    failures: int
    shots: int
    fidelity_optimized: float
    fidelity_baseline: float


@dataclass
class TeleportRun:
    d: int
    decoder: str
    seed: int
    shots: int
    repeats: int
    rows: list[TeleportBatchRow] = field(default_factory=list)

    def mean_failures(self, rate: float) -> float:
        picked = [r.failures for r in self.rows if r.rate == rate]
        return float(np.mean(picked)) if picked else float("nan")

    def rates(self) -> list[float]:
        seen = []
        for r in self.rows:
            if r.rate not in seen:
                seen.append(r.rate)
        return seen


def run_fidelity_experiment(
    layout: ToricLayout,
    rates,
    shots: int,
    repeats: int,
    decoder: str,
    seed: int,
    weights: ModelWeights | None = None,
) -> TeleportRun:
    """Repeated batches of ``shots`` teleport shots per noise rate.

    Shot streams are globally indexed by (rate, batch, shot), so results
    are reproducible and independent of execution order.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    run = TeleportRun(d=layout.d, decoder=decoder, seed=seed, shots=shots, repeats=repeats)
    for i, rate in enumerate(rates):
        for batch in range(repeats):
            first = (i * repeats + batch) * shots
            failures, base_failures, _, _ = run_teleport_batch(
                layout, rate, decoder, seed, first, shots, weights
            )
            run.rows.append(TeleportBatchRow(
                rate=float(rate),
                batch_id=batch,
                failures=failures,
                shots=shots,
                fidelity_optimized=1.0 - failures / shots,
                fidelity_baseline=1.0 - base_failures / shots,
            ))
    return run


def fit_crossing(rates, fidelity_optimized, fidelity_baseline):
    """Quadratic least-squares fit of both curves; smallest in-range rate
    where the fitted optimized curve meets the fitted baseline, or None."""
    rates = np.asarray(rates, dtype=float)
    diff = np.polyfit(rates, np.asarray(fidelity_optimized) - np.asarray(fidelity_baseline), 2)
    roots = np.roots(diff)
    real = sorted(
        float(r.real) for r in roots
        if abs(r.imag) < 1e-9 and rates.min() - 1e-12 <= r.real <= rates.max() + 1e-12
    )
    return real[0] if real else None
