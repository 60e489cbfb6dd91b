"""Starlike log-harmonic mappings: construction, evaluation and numerical certification."""

from .analysis import (
    SampleGrid,
    SchwarzWitness,
    TheoremId,
    VerificationReport,
    construct_starlike,
    dilatation_bound_check,
    dilatation_disc_check,
    h_over_g_bound_check,
    jacobian_bounds_check,
    measure_schwarz,
    schwarz_check,
    sense_preserving_check,
    subordination_margin,
    verify_starlike,
)
from .errors import (
    AlphaOutOfRange,
    BranchAmbiguity,
    DegenerateDenominator,
    LogHarmonicError,
    NotSchwarz,
    OriginSingularity,
    PointOutsideRadius,
    SingularityDetected,
    SingularLeadingCoefficient,
    SpecParseError,
)
from .geometry import (
    BoundaryCurve,
    InjectivityEstimate,
    export_curve,
    injectivity_radius,
    sample_boundary,
)
from .mapping import (
    DilatationValue,
    LogHarmonicMap,
    WirtingerPair,
    dilatation,
    eval_map,
    identity_map,
    jacobian,
    pde_residual,
    power_map,
    starlike_functional,
    wirtinger,
)
from .series import TaylorSeries

__version__ = "0.1.0"

__all__ = [
    "AlphaOutOfRange",
    "BoundaryCurve",
    "BranchAmbiguity",
    "DegenerateDenominator",
    "DilatationValue",
    "InjectivityEstimate",
    "LogHarmonicError",
    "LogHarmonicMap",
    "NotSchwarz",
    "OriginSingularity",
    "PointOutsideRadius",
    "SampleGrid",
    "SchwarzWitness",
    "SingularLeadingCoefficient",
    "SingularityDetected",
    "SpecParseError",
    "TaylorSeries",
    "TheoremId",
    "VerificationReport",
    "WirtingerPair",
    "construct_starlike",
    "dilatation",
    "dilatation_bound_check",
    "dilatation_disc_check",
    "eval_map",
    "export_curve",
    "h_over_g_bound_check",
    "identity_map",
    "injectivity_radius",
    "jacobian",
    "jacobian_bounds_check",
    "measure_schwarz",
    "pde_residual",
    "power_map",
    "sample_boundary",
    "schwarz_check",
    "sense_preserving_check",
    "starlike_functional",
    "subordination_margin",
    "verify_starlike",
    "wirtinger",
]
