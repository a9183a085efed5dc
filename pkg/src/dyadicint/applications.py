"""Special-function applications of the dyadic series.

Each of these writes a named integral as the alternating dyadic series
with its own closed-form inner limits, rather than delegating to the
generic engine, so truncation behaviour can be studied per formula:

* li(x): the logarithmic integral from 2, with terms
  (-1)**(n+1) / (ln n - k ln 2);
* elliptic_f(phi, h): the incomplete elliptic integral of the first
  kind in parameter form, terms (-1)**(n+1) / sqrt(1 - h sin^2(n/2**k));
* pendulum_period: the libration period of a pendulum in the cosine
  well U = -U0 cos(theta), via the substitution that moves the turning
  angle into the integrand.

A cross-check test asserts li agrees with the generic direct form to
1e-6 at depth 12; keep the index limits here in sync with the engine's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dyadic import floor_log2, scaled_floor
from .errors import DomainError
from .summation import NeumaierSum

__all__ = ["PendulumParams", "elliptic_f", "li", "pendulum_period"]

_LN2 = math.log(2.0)
_HALF_PI = math.pi / 2.0

# Parameters h >= 1 make the integrand singular inside the interval;
# values within this cap of 1 are clamped rather than allowed to feed
# near-zero radicands into the square root.
_H_CAP = 1.0 - 1e-6

# Energies this close (relative to U0) to the well edges make
# arccos(-E/U0) hopelessly ill conditioned.
_DEGENERACY_MARGIN = 1e-12


def _check_levels(levels: int) -> None:
    if not isinstance(levels, int) or isinstance(levels, bool):
        raise DomainError("truncation depth P must be an integer")
    if not 0 <= levels <= 40:
        raise DomainError("truncation depth P must be in [0, 40]")


def li(x: float, levels: int) -> float:
    """Logarithmic integral of x from 2: integral of dt / ln t over [2, x].

    Series terms are (-1)**(n+1) / (ln n - k ln 2) over scales k from
    -floor_log2(x), inner range floor(2**(k+1)) < n <= floor(2**k x).
    Requires x > 2.
    """
    _check_levels(levels)
    if not x > 2.0:
        raise DomainError("li requires x > 2")
    log = math.log
    k0 = -floor_log2(x)
    acc = NeumaierSum()
    for k in range(k0, k0 + levels + 1):
        n_lo = (1 << (k + 1)) + 1 if k >= -1 else 1
        n_hi = scaled_floor(x, k)
        s = 0.0
        carry = 0.0
        k_ln2 = k * _LN2
        for n in range(n_lo, n_hi + 1):
            v = 1.0 / (log(n) - k_ln2)
            if not n & 1:
                v = -v
            t = s + v
            if abs(s) >= abs(v):
                carry += (s - t) + v
            else:
                carry += (v - t) + s
            s = t
        acc.add(math.ldexp(s + carry, -k))
    return acc.total()


def elliptic_f(phi: float, h: float, levels: int) -> float:
    """Incomplete elliptic integral F(phi | h) of the first kind.

    Integral of (1 - h sin^2 t)**-0.5 over [0, phi] for amplitude
    0 < phi <= pi/2 and parameter 0 <= h < 1 (h is the parameter m, the
    square of the modulus).  h is clamped to 1 - 1e-6.
    """
    _check_levels(levels)
    if not 0.0 < phi <= _HALF_PI:
        raise DomainError("elliptic_f requires 0 < phi <= pi/2")
    if not 0.0 <= h < 1.0:
        raise DomainError("elliptic_f requires parameter 0 <= h < 1")
    h_eff = min(h, _H_CAP)
    sin = math.sin
    sqrt = math.sqrt
    ldexp = math.ldexp
    k0 = -floor_log2(phi)
    acc = NeumaierSum()
    for k in range(k0, k0 + levels + 1):
        n_hi = scaled_floor(phi, k)
        s = 0.0
        carry = 0.0
        for n in range(1, n_hi + 1):
            sn = sin(ldexp(n, -k))
            v = 1.0 / sqrt(1.0 - h_eff * sn * sn)
            if not n & 1:
                v = -v
            t = s + v
            if abs(s) >= abs(v):
                carry += (s - t) + v
            else:
                carry += (v - t) + s
            s = t
        acc.add(ldexp(s + carry, -k))
    return acc.total()


@dataclass(frozen=True)
class PendulumParams:
    """Pendulum in the well U(theta) = -U0 cos(theta), energy -U0 < E < U0.

    Libration only: energies at or beyond +U0 (the rotation threshold)
    or at the well bottom -U0 are rejected, including a relative margin
    of 1e-12 where arccos would be degenerate.
    """

    mass: float
    well_depth: float  # U0
    energy: float  # E

    def __post_init__(self) -> None:
        if not self.mass > 0.0:
            raise DomainError("mass must be > 0")
        if not self.well_depth > 0.0:
            raise DomainError("well depth U0 must be > 0")
        u0 = self.well_depth
        margin = _DEGENERACY_MARGIN * u0
        if self.energy >= u0 - margin:
            raise DomainError(
                "energy at or above U0: no libration (rotation threshold)")
        if self.energy <= -u0 + margin:
            raise DomainError(
                "energy at or below -U0: no motion at the well bottom")

    @property
    def turning_angle(self) -> float:
        """Amplitude theta2 = arccos(-E / U0), in (0, pi)."""
        return math.acos(-self.energy / self.well_depth)

    @property
    def modulus_sq(self) -> float:
        """eta^2 = 2 U0 / (E + U0); exceeds 1 for libration."""
        return 2.0 * self.well_depth / (self.energy + self.well_depth)

    @property
    def modulus(self) -> float:
        return math.sqrt(self.modulus_sq)


def pendulum_period(params: PendulumParams, levels: int) -> float:
    """Full libration period via the dyadic series.

    T = sqrt(2 m / (E + U0)) * sum over scales k from -floor_log2(2 theta2)
    of 2**-k sum_n (-1)**(n+1) / sqrt(1 - eta^2 sin^2(theta2/2 - n/2**(k+1)))
    with inner range n <= floor(2**(k+1) theta2).  The substitution puts
    the turning points strictly outside the node grid, so the radicand
    stays positive for admissible energies.
    """
    _check_levels(levels)
    theta2 = params.turning_angle
    eta_sq = params.modulus_sq
    half_angle = 0.5 * theta2
    width = 2.0 * theta2  # exact scaling by 2
    sin = math.sin
    sqrt = math.sqrt
    ldexp = math.ldexp
    k0 = -floor_log2(width)
    acc = NeumaierSum()
    for k in range(k0, k0 + levels + 1):
        n_hi = scaled_floor(width, k)
        s = 0.0
        carry = 0.0
        for n in range(1, n_hi + 1):
            sn = sin(half_angle - ldexp(n, -(k + 1)))
            radicand = 1.0 - eta_sq * sn * sn
            if radicand <= 0.0:
                raise DomainError(
                    "pendulum series hit a non-positive radicand; the "
                    "energy is too close to a well edge for this depth")
            v = 1.0 / sqrt(radicand)
            if not n & 1:
                v = -v
            t = s + v
            if abs(s) >= abs(v):
                carry += (s - t) + v
            else:
                carry += (v - t) + s
            s = t
        acc.add(ldexp(s + carry, -k))
    prefactor = sqrt(2.0 * params.mass / (params.energy + params.well_depth))
    return prefactor * acc.total()
