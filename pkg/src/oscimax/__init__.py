"""Numerical laboratory for maximal estimates of fractional Schroedinger propagators.

Band-limited data are described by their Fourier transform
(:mod:`oscimax.spectral`), propagated with an adaptive panel quadrature
(:mod:`oscimax.propagator`), restricted to approach paths
(:mod:`oscimax.geometry`) and measured in mixed norms
(:mod:`oscimax.maximal`).  :mod:`oscimax.scenarios` runs the witness
constructions over lambda ladders and :mod:`oscimax.kernelcheck` probes the
kernel estimates behind the sufficiency bound.
"""
from ._backend import BACKEND, set_threads
from .errors import NumericBudgetError, OscimaxError, ValidationError
from .geometry import (
    AlphaMeasure,
    CantorDirections,
    ExpTangential,
    Interval,
    LineField,
    PowerCurve,
    Product,
    Singleton,
    Vertical,
    alpha_measure_integral,
    cantor_intervals,
    frostman_ratio,
    minkowski_dim_estimate,
    nearest_cantor_endpoint,
    path_point,
)
from .maximal import MixedNormSpec, TGrid, XInterval, maximal_in_time, mixed_norm
from .propagator import EvalRequest, evaluate, evaluate_many, evaluate_oracle, phase_bound
from .spectral import (
    Linear,
    NegativeDispersion,
    NoTwist,
    SpectralProfile,
    band,
    indicator,
    make_profile,
    sobolev_norm,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "set_threads", "NumericBudgetError", "OscimaxError", "ValidationError",
    "AlphaMeasure", "CantorDirections", "ExpTangential", "Interval", "LineField",
    "PowerCurve", "Product", "Singleton", "Vertical", "alpha_measure_integral",
    "cantor_intervals", "frostman_ratio", "minkowski_dim_estimate",
    "nearest_cantor_endpoint", "path_point", "MixedNormSpec", "TGrid", "XInterval",
    "maximal_in_time", "mixed_norm", "EvalRequest", "evaluate", "evaluate_many",
    "evaluate_oracle", "phase_bound", "Linear", "NegativeDispersion", "NoTwist",
    "SpectralProfile", "band", "indicator", "make_profile", "sobolev_norm",
]
