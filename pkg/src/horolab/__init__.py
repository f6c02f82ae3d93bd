"""Numerical laboratory for backward-orbit cocycles of rational maps.

The package studies full backward orbits converging to a repelling
fixed point: the certified series for the height cocycle between two
such orbits, the resulting height sets and their density structure,
the additive semigroup of cocycle values for the quadratic family
z**2 + epsilon, and the certified disk geometry (sigma, delta) that
turns the sign law into a quantitative lower bound.
"""

from .cocycle import (
    CocycleValue,
    DensityReport,
    HeightPoint,
    ProgressionReport,
    SemigroupTable,
    basic_cocycle,
    cocycle_field,
    cocycle_vs_fixed,
    height_set,
    make_density_report,
    progression_density_check,
    pushforward_height,
    semigroup_convergence,
    series_terms,
)
from .errors import (
    ConfigError,
    ConstructionError,
    DegenerateBranchError,
    DepthBudgetError,
    DivergentWordError,
    DomainError,
    HorolabError,
    PreconditionError,
    RootFindingError,
    SingularTermError,
    SuiteFailureError,
)
from .julia import (
    EscapeResult,
    JuliaSample,
    escape_membership,
    inverse_iteration_sample,
    repelling_sample,
)
from .maps import (
    QuadraticParam,
    RationalFunction,
    RationalMap,
    compose,
    evaluate,
    iterate,
    quadratic_epsilon,
)
from .orbits import (
    OrbitWord,
    PiMembership,
    RealizedOrbit,
    concatenate,
    fixed_word,
    is_in_Pi_a,
    principal_symbol,
    realize,
    shift,
)
from .periodic import (
    CollinearityReport,
    Linearizer,
    PeriodicPoint,
    all_roots,
    build_linearizer,
    classify,
    collinearity_in_linearizer,
    make_periodic_point,
    periodic_points,
    preimage_points,
)
from .quadratic import (
    BoundCheck,
    ContainmentReport,
    ExcursionStats,
    ExtremalityReport,
    LimitDecomposition,
    SigmaDelta,
    branch_exceptional,
    build_B_epsilon,
    cocycle_lower_bound_check,
    default_sigma_delta,
    derivative_extremality_check,
    disk_containment_check,
    excursion_stats,
    family_word,
    find_sigma,
    find_sigma_delta,
    fixed_point_a,
    limit_decomposition_check,
    list_1_1_member,
    nested_decomposition_check,
    normalize_word,
    quadratic_map,
    sample_words,
    word_from_json,
)

__version__ = "0.1.0"

__all__ = [
    "BoundCheck",
    "CocycleValue",
    "CollinearityReport",
    "ConfigError",
    "ConstructionError",
    "ContainmentReport",
    "DegenerateBranchError",
    "DensityReport",
    "DepthBudgetError",
    "DivergentWordError",
    "DomainError",
    "EscapeResult",
    "ExcursionStats",
    "ExtremalityReport",
    "HeightPoint",
    "HorolabError",
    "JuliaSample",
    "LimitDecomposition",
    "Linearizer",
    "OrbitWord",
    "PeriodicPoint",
    "PiMembership",
    "PreconditionError",
    "ProgressionReport",
    "QuadraticParam",
    "RationalFunction",
    "RationalMap",
    "RealizedOrbit",
    "RootFindingError",
    "SemigroupTable",
    "SigmaDelta",
    "SingularTermError",
    "SuiteFailureError",
    "all_roots",
    "basic_cocycle",
    "branch_exceptional",
    "build_B_epsilon",
    "build_linearizer",
    "classify",
    "cocycle_field",
    "cocycle_lower_bound_check",
    "cocycle_vs_fixed",
    "collinearity_in_linearizer",
    "compose",
    "concatenate",
    "default_sigma_delta",
    "derivative_extremality_check",
    "disk_containment_check",
    "escape_membership",
    "evaluate",
    "excursion_stats",
    "family_word",
    "find_sigma",
    "find_sigma_delta",
    "fixed_point_a",
    "fixed_word",
    "height_set",
    "inverse_iteration_sample",
    "is_in_Pi_a",
    "iterate",
    "limit_decomposition_check",
    "list_1_1_member",
    "make_density_report",
    "make_periodic_point",
    "nested_decomposition_check",
    "normalize_word",
    "periodic_points",
    "preimage_points",
    "principal_symbol",
    "progression_density_check",
    "pushforward_height",
    "quadratic_epsilon",
    "quadratic_map",
    "realize",
    "repelling_sample",
    "sample_words",
    "semigroup_convergence",
    "series_terms",
    "shift",
    "word_from_json",
]
