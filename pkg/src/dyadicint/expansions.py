"""Series forms built on the shifted engine: function advance over a
window, periodic residuals, and the weighted-exponential expansion of
numbers in (0, 1].

advance reconstructs f(x + h) from f(x) plus the shifted series of f'
over a window of width h; with h = 1 the leading scale is 0 and the
inner ranges reduce to full powers of two automatically.  Integrating a
derivative over one full period must cancel, so periodic_residual is a
direct truncation-quality probe.

unit_exponential_expansion writes x in (0, 1] as

    x**(2**s) = 1 + sum_k 2**-(k-s) sum_n (-1)**n exp(-n / 2**(k-s))

with inner range n <= floor(2**k ln(1/x)): the scale shift s leaves the
index ranges alone and rescales every summand, turning the expansion of
x into one of x**(2**s).  (Check: substituting x -> x**(2**s) in the
s = 0 series multiplies ln(1/x) by 2**s, and reindexing the outer sum
back to the original leading scale moves the factor into the summand
as 2**(k-s).)
"""

from __future__ import annotations

import math

from .dyadic import floor_log2, scaled_floor
from .engine import as_integrand, _shifted_series
from .errors import DomainError
from .summation import NeumaierSum

__all__ = [
    "advance",
    "periodic_residual",
    "unit_exponential_expansion",
    "unit_expansion_terms",
]

# ln(1/x) can be arbitrarily close to 0 for x just under 1; the leading
# scale is clamped so the node grid cannot outrun double precision.
# Accuracy degrades gracefully for x > 1 - 2**-50 (the result is 1.0).
_MAX_LEAD_SCALE = 60


def advance(f_at_x: float, f_prime, x: float, h: float, levels: int) -> float:
    """f(x + h) from f(x) and the shifted series of f' over width h."""
    if not h > 0.0:
        raise DomainError("advance requires h > 0")
    spec = as_integrand(f_prime)
    total, _, _, _ = _shifted_series(spec.fn, x, h, levels, False)
    return f_at_x + total


def periodic_residual(f_prime, period: float, x: float, levels: int) -> float:
    """Truncated series of f' over one full period starting at x.

    Exactly zero in the limit of infinite depth when f' has the given
    period; the finite-depth value measures truncation error directly.
    """
    if not period > 0.0:
        raise DomainError("periodic_residual requires period > 0")
    spec = as_integrand(f_prime)
    total, _, _, _ = _shifted_series(spec.fn, x, period, levels, False)
    return total


def _unit_terms(x: float, shift: int, levels: int):
    """Yield (k, n, term) of the weighted-exponential expansion of x.

    Terms are generated scales-coarse-to-fine, n ascending, each term
    fully weighted: (-1)**n 2**-(k+shift) exp(-n / 2**(k+shift)).
    """
    log_inv = -math.log(x)  # ln(1/x) > 0 for x < 1
    k0 = min(-floor_log2(log_inv), _MAX_LEAD_SCALE)
    ldexp = math.ldexp
    exp = math.exp
    for k in range(k0, k0 + levels + 1):
        n_hi = scaled_floor(log_inv, k)
        ks = k - shift
        for n in range(1, n_hi + 1):
            term = ldexp(exp(-ldexp(n, -ks)), -ks)
            yield k, n, -term if n & 1 else term


def _check_unit_args(x: float, shift: int, levels: int) -> None:
    if not isinstance(shift, int) or isinstance(shift, bool):
        raise DomainError("scale shift s must be an integer")
    if not 0 <= levels <= 40:
        raise DomainError("truncation depth P must be in [0, 40]")
    if not 0.0 < x <= 1.0:
        raise DomainError("unit expansion requires 0 < x <= 1")


def unit_expansion_terms(x: float, shift: int, levels: int) -> list[tuple[int, int, float]]:
    """The expansion's term table, for scale-shift and regression tests."""
    _check_unit_args(x, shift, levels)
    if x == 1.0:
        return []
    return list(_unit_terms(x, shift, levels))


def unit_exponential_expansion(x: float, shift: int = 0, levels: int = 16) -> float:
    """Weighted-exponential expansion of x in (0, 1], truncated at depth P.

    With shift = s the same index ranges approximate x**(2**s) instead
    of x.  x = 1.0 returns exactly 1.0 (the series is empty).
    """
    _check_unit_args(x, shift, levels)
    if x == 1.0:
        return 1.0
    acc = NeumaierSum()
    for _, _, term in _unit_terms(x, shift, levels):
        acc.add(term)
    return 1.0 + acc.total()
