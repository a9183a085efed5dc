"""Reference integrators used only to verify the series engines.

Everything here is deliberately independent of the engine module: a
classic recursive adaptive-Simpson integrator with Richardson
correction, and an arithmetic-geometric-mean evaluation of the complete
elliptic integral.  Agreement between two methods that share no code is
the whole point, so resist the urge to refactor common helpers.

Endpoint singularities are the caller's problem: nudge the limits
inward (see ``nudged``) before integrating an open-interval integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DepthExhaustedError, DomainError

__all__ = ["OracleConfig", "adaptive_quad", "agm_complete_elliptic", "nudged"]

_MAX_DEPTH_CAP = 60


@dataclass(frozen=True)
class OracleConfig:
    """Absolute tolerance and recursion cap for adaptive_quad."""

    tol: float = 1e-10
    max_depth: int = 50

    def __post_init__(self) -> None:
        if not self.tol > 0.0:
            raise DomainError("oracle tol must be > 0")
        if not 1 <= self.max_depth <= _MAX_DEPTH_CAP:
            raise DomainError(f"max_depth must be in [1, {_MAX_DEPTH_CAP}]")


def nudged(a: float, b: float, offset: float = 1e-12) -> tuple[float, float]:
    """Pull both endpoints inward by offset * (b - a)."""
    shift = offset * (b - a)
    return a + shift, b - shift


def _simpson(fn, a, fa, b, fb):
    """One Simpson panel; returns (midpoint, f(midpoint), panel value)."""
    m = 0.5 * (a + b)
    fm = fn(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _refine(fn, a, fa, b, fb, m, fm, whole, tol, depth):
    lm, flm, left = _simpson(fn, a, fa, m, fm)
    rm, frm, right = _simpson(fn, m, fm, b, fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        # Richardson: the correction term lifts Simpson to 6th order.
        return left + right + delta / 15.0
    if depth <= 0:
        raise DepthExhaustedError(
            f"adaptive_quad: depth exhausted on [{a!r}, {b!r}] "
            f"(estimate gap {delta!r})"
        )
    half = 0.5 * tol
    return _refine(fn, a, fa, m, fm, lm, flm, left, half, depth - 1) + _refine(
        fn, m, fm, b, fb, rm, frm, right, half, depth - 1
    )


def adaptive_quad(f, a: float, b: float, cfg: OracleConfig | None = None) -> float:
    """Integrate f over [a, b] to roughly cfg.tol absolute accuracy.

    f may be any callable of one float (the engine's integrand wrapper
    works too, via duck typing).  Raises DepthExhaustedError when the
    recursion cap is hit before the tolerance is met.
    """
    if cfg is None:
        cfg = OracleConfig()
    if a == b:
        return 0.0
    fa = f(a)
    fb = f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    return _refine(f, a, fa, b, fb, m, fm, whole, cfg.tol, cfg.max_depth)


def agm_complete_elliptic(h: float) -> float:
    """Complete elliptic integral K for parameter h (not modulus), 0 <= h < 1.

    K(h) = integral of (1 - h sin^2 t)^(-1/2) over [0, pi/2], computed
    as pi / (2 AGM(1, sqrt(1 - h))).  The AGM iteration converges
    quadratically; it stops once the relative change drops below 1e-15.
    """
    if not 0.0 <= h < 1.0:
        raise DomainError("agm_complete_elliptic requires 0 <= h < 1")
    am = 1.0
    gm = math.sqrt(1.0 - h)
    while abs(am - gm) > 1e-15 * am:
        am, gm = 0.5 * (am + gm), math.sqrt(am * gm)
    return math.pi / (2.0 * am)
