"""Toric-code decoding laboratory.

Simulates code-capacity Pauli noise on periodic surface codes, decodes
with exact minimum-weight matching or a convolutional generator network,
verifies outcomes homologically (with exhaustive d=3 oracles), and drives
a fault-tolerant teleportation pipeline on Pauli frames.
"""

from .exceptions import (
    DistanceTooLarge,
    GanqecError,
    InvalidDistance,
    NoCrossing,
    OddDefectCount,
    SchemaMismatch,
    ShapeMismatch,
    SizeMismatch,
)
from .lattice import ToricLayout, build_layout, logical_windings, to_dual, from_dual
from .syndrome import compute_syndrome, compute_syndromes_batch
from .noise import NoiseConfig, sample_depolarizing, sample_iid
from .mwpm import DecodeOutcome, Matching, decode_mwpm, mwpm_match, pairing_to_correction, torus_distance
from .homology import judge, optimal_success, syndrome_probability
from .gan_decoder import decode_gan, encode_syndrome, generator_forward, project_correction, read_correction
from .weights_io import ModelWeights, read_weights, write_weights
from .teleport import recovery_gate, run_fidelity_experiment, teleport_block
from .sweeps import SweepResult, estimate_threshold, sweep, wilson_interval

__version__ = "0.1.0"

__all__ = [
    "DecodeOutcome",
    "DistanceTooLarge",
    "GanqecError",
    "InvalidDistance",
    "Matching",
    "ModelWeights",
    "NoCrossing",
    "NoiseConfig",
    "OddDefectCount",
    "SchemaMismatch",
    "ShapeMismatch",
    "SizeMismatch",
    "SweepResult",
    "ToricLayout",
    "build_layout",
    "compute_syndrome",
    "compute_syndromes_batch",
    "decode_gan",
    "decode_mwpm",
    "encode_syndrome",
    "estimate_threshold",
    "from_dual",
    "generator_forward",
    "judge",
    "logical_windings",
    "mwpm_match",
    "optimal_success",
    "pairing_to_correction",
    "project_correction",
    "read_correction",
    "read_weights",
    "recovery_gate",
    "run_fidelity_experiment",
    "sample_depolarizing",
    "sample_iid",
    "sweep",
    "syndrome_probability",
    "teleport_block",
    "to_dual",
    "torus_distance",
    "wilson_interval",
    "write_weights",
]
