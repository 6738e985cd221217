"""Prime-product neighborhood vectors for alignment-free DNA comparison."""

from ._ppn import (
    DistanceMatrix,
    EncodedSequence,
    PpnError,
    PpnVector,
    distance,
    encode,
    eta,
    factor_gamma,
    gamma,
    nqd,
    nrf,
    pairwise_matrix,
    permutation_table,
    ppn_vector,
    read_fasta,
    representative_sequence,
    simulate,
    upgma,
    window_count,
)

__all__ = [
    "DistanceMatrix",
    "EncodedSequence",
    "PpnError",
    "PpnVector",
    "distance",
    "encode",
    "eta",
    "factor_gamma",
    "gamma",
    "nqd",
    "nrf",
    "pairwise_matrix",
    "permutation_table",
    "ppn_vector",
    "read_fasta",
    "representative_sequence",
    "simulate",
    "upgma",
    "window_count",
]
