"""System-to-system constructions."""

from .desingularization import (
    DesingularizedSystem,
    EmbeddingReport,
    check_embedding_conditions,
    desingularize,
    h_embed,
    identity_letter_map,
)
from .expansion import ExpansionReport, check_ideal_expansion, expand_ideals_to_full, unreached_idempotents
from .ideal_lattice import (
    AdmissiblePair,
    PairLattice,
    admissible_pairs,
    hereditary_saturated_closure,
    ideal_generators,
    is_hereditary,
    is_saturated,
    kernel_failures,
    pair_generator,
    project_to_quotient,
    quotient_system,
)
from .tilde import TildeMaps, TildeSystem, find_CD, tilde_system

__all__ = [
    "AdmissiblePair",
    "DesingularizedSystem",
    "EmbeddingReport",
    "ExpansionReport",
    "PairLattice",
    "TildeMaps",
    "TildeSystem",
    "admissible_pairs",
    "check_embedding_conditions",
    "check_ideal_expansion",
    "desingularize",
    "expand_ideals_to_full",
    "find_CD",
    "h_embed",
    "hereditary_saturated_closure",
    "identity_letter_map",
    "ideal_generators",
    "is_hereditary",
    "is_saturated",
    "kernel_failures",
    "pair_generator",
    "project_to_quotient",
    "quotient_system",
    "tilde_system",
    "unreached_idempotents",
]
