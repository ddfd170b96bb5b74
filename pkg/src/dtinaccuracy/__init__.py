"""Weighted interval inaccuracy for doubly truncated lifetime distributions.

The package is organised in layers: :mod:`~dtinaccuracy.distributions`
(parametric laws, PHRM/PRHRM models, monotone transforms),
:mod:`~dtinaccuracy.quadrature` (adaptive Gauss-Kronrod),
:mod:`~dtinaccuracy.measures` (inaccuracy measures and reliability
functionals), :mod:`~dtinaccuracy.laws` (numerical verifiers for bounds,
identities and characterizations) and :mod:`~dtinaccuracy.cli`.
"""

__version__ = "0.1.0"

from .distributions import (  # noqa: E402
    CATALOG,
    ModelPair,
    MonotoneMap,
    TruncationWindow,
    exponential,
    make_distribution,
    make_phrm,
    make_prhrm,
    rayleigh,
    transformed,
)
from .exceptions import DivergenceError, DomainError, IntegrandError, ParameterError  # noqa: E402
from .measures import (  # noqa: E402
    MeasureValue,
    discrete_inaccuracy,
    gcm,
    geometric_vitality,
    gfr,
    interval_inaccuracy,
    mc_estimate,
    weighted_inaccuracy,
    weighted_interval_inaccuracy,
    weighted_log_moment,
    weighted_past_inaccuracy,
    weighted_residual_inaccuracy,
)
from .quadrature import QuadratureConfig, integrate  # noqa: E402

__all__ = [
    "CATALOG",
    "ModelPair",
    "MonotoneMap",
    "TruncationWindow",
    "exponential",
    "rayleigh",
    "make_distribution",
    "make_phrm",
    "make_prhrm",
    "transformed",
    "DivergenceError",
    "DomainError",
    "IntegrandError",
    "ParameterError",
    "MeasureValue",
    "discrete_inaccuracy",
    "gcm",
    "geometric_vitality",
    "gfr",
    "interval_inaccuracy",
    "mc_estimate",
    "weighted_inaccuracy",
    "weighted_interval_inaccuracy",
    "weighted_log_moment",
    "weighted_past_inaccuracy",
    "weighted_residual_inaccuracy",
    "QuadratureConfig",
    "integrate",
]
