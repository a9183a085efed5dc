"""dyadicint: definite integrals as truncated alternating series over
dyadic rationals, with exact binary index arithmetic throughout.
"""

from .applications import PendulumParams, elliptic_f, li, pendulum_period
from .dyadic import digit, floor_log, floor_log2, reconstruct, scaled_floor
from .engine import (
    DyadicNode,
    IntegrandSpec,
    QuadratureResult,
    error_bound,
    integrate,
    integrate_2d,
    integrate_direct,
    integrate_incremental,
    integrate_inverse,
    level_sum,
)
from .errors import (
    ConfigurationError,
    DepthExhaustedError,
    DomainError,
    DyadicIntError,
    IntegrandError,
    RangeError,
)
from .expansions import advance, periodic_residual, unit_exponential_expansion
from .exprparse import EvalError, ParseError
from .oracle import OracleConfig, adaptive_quad, agm_complete_elliptic

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DepthExhaustedError",
    "DomainError",
    "DyadicIntError",
    "DyadicNode",
    "EvalError",
    "IntegrandError",
    "IntegrandSpec",
    "OracleConfig",
    "ParseError",
    "PendulumParams",
    "QuadratureResult",
    "RangeError",
    "adaptive_quad",
    "advance",
    "agm_complete_elliptic",
    "digit",
    "elliptic_f",
    "error_bound",
    "floor_log",
    "floor_log2",
    "integrate",
    "integrate_2d",
    "integrate_direct",
    "integrate_incremental",
    "integrate_inverse",
    "level_sum",
    "li",
    "pendulum_period",
    "periodic_residual",
    "reconstruct",
    "scaled_floor",
    "unit_exponential_expansion",
    "__version__",
]
