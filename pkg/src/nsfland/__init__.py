"""Bitstring fitness-landscape toolkit.

Generates landscapes with and without the similar-fitness neighbourhood
property, verifies the property from its defining distributions, computes
exact local-search reach probabilities through absorbing-chain analysis,
cross-checks them with a Monte Carlo climber, and orchestrates the full
comparative study behind one CLI.
"""

from ._version import __version__
from .core import (
    FitnessLandscape,
    Restriction,
    bit_position,
    bits_to_index,
    global_maxima,
    index_to_bits,
    load_landscape,
    load_landscapes,
    neighbour_table,
    neighbours,
    restrict,
    save_landscape,
)
from .errors import CapacityError, NumericalError, ValidationError
from .experiment import (
    ExperimentConfig,
    ExperimentReport,
    default_domain_size,
    landscape_seed,
    run_experiment,
)
from .generate import GenConfig, derive_seed, generate, generate_batch
from .markov import (
    AbsorptionResult,
    CombineMode,
    TransitionModel,
    TransitionPolicy,
    absorption_probabilities,
    absorption_probabilities_exact,
    build_chain,
    fundamental_matrix,
    import_chain,
    p_global,
    summarise_chain,
)
from .markov import ChainSummary
from .nsf import (
    NsfProfile,
    Violation,
    check_nsf,
    delta_set,
    neighbourhood_union,
    proportion_neighbours,
    proportion_space,
)
from .search import ClimbTrace, ReachEstimate, estimate_reach, hill_climb
from .stats import (
    KsResult,
    five_number_summary,
    kolmogorov_survival,
    ks_two_sample,
)
from .toycheck import ToyReport, run_toy_verification

__all__ = [
    "__version__",
    "AbsorptionResult",
    "CapacityError",
    "ChainSummary",
    "ClimbTrace",
    "CombineMode",
    "ExperimentConfig",
    "ExperimentReport",
    "FitnessLandscape",
    "GenConfig",
    "KsResult",
    "NsfProfile",
    "NumericalError",
    "ReachEstimate",
    "Restriction",
    "ToyReport",
    "TransitionModel",
    "TransitionPolicy",
    "ValidationError",
    "Violation",
    "absorption_probabilities",
    "absorption_probabilities_exact",
    "bit_position",
    "bits_to_index",
    "build_chain",
    "check_nsf",
    "default_domain_size",
    "delta_set",
    "derive_seed",
    "estimate_reach",
    "five_number_summary",
    "fundamental_matrix",
    "generate",
    "generate_batch",
    "global_maxima",
    "hill_climb",
    "import_chain",
    "index_to_bits",
    "kolmogorov_survival",
    "ks_two_sample",
    "landscape_seed",
    "load_landscape",
    "load_landscapes",
    "neighbour_table",
    "neighbourhood_union",
    "neighbours",
    "p_global",
    "proportion_neighbours",
    "proportion_space",
    "restrict",
    "run_experiment",
    "run_toy_verification",
    "save_landscape",
    "summarise_chain",
]
