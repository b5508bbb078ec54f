"""Two-sector Fock-space models of concept combination and negation."""

from .combination import (
    Connective,
    DeviationClass,
    DeviationKind,
    FeasibilityInterval,
    FitStrategy,
    FockParams,
    InfeasibleError,
    PairWeights,
    Sector1Realization,
    classify_deviation,
    conjunction_weight,
    disjunction_weight,
    feasibility_interval,
    fit_pair,
    interference_magnitude,
    realize_sector1,
    solve_theta,
)
from .dataset import Dataset, MembershipRecord, load_dataset
from .negation import (
    ClassicalityReport,
    EntangledRealization,
    NegationFockParams,
    NegationRecord,
    NonClassicalError,
    QuadrantParams,
    classicality_conditions,
    construct_entangled,
    fit_negation_model,
    kolmogorov_oracle,
    negation_conjunction_weight,
    sector1_negation_weights,
    sector2_marginal_check,
)

__all__ = [
    "ClassicalityReport",
    "Connective",
    "Dataset",
    "DeviationClass",
    "DeviationKind",
    "EntangledRealization",
    "FeasibilityInterval",
    "FitStrategy",
    "FockParams",
    "InfeasibleError",
    "MembershipRecord",
    "NegationFockParams",
    "NegationRecord",
    "NonClassicalError",
    "PairWeights",
    "QuadrantParams",
    "Sector1Realization",
    "classicality_conditions",
    "classify_deviation",
    "conjunction_weight",
    "construct_entangled",
    "disjunction_weight",
    "feasibility_interval",
    "fit_negation_model",
    "fit_pair",
    "interference_magnitude",
    "kolmogorov_oracle",
    "load_dataset",
    "negation_conjunction_weight",
    "realize_sector1",
    "sector1_negation_weights",
    "sector2_marginal_check",
    "solve_theta",
]

__version__ = "0.1.0"
