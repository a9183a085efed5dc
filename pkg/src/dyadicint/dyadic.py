"""Exact radix-digit arithmetic on floating-point values.

A finite double is the dyadic rational num / 2**d handed back by
float.as_integer_ratio(), so radix digits, scale floors and the leading
scale are all pure integer computations.  No floating logarithm or
floating division appears anywhere in this module: quantities like
floor(x * 2**k) are exact regardless of magnitude, which is what makes
the series index ranges in the engine reproducible bit for bit.

The digit of x at scale k in radix p is

    digit(p, k, x) = floor(x / p**k) - p * floor(x / p**(k+1))

which vanishes for every k above the leading scale floor(log_p x), and
obeys the shift rule digit(p, k - s, x) == digit(p, k, x * p**s)
whenever x * p**s is exactly representable.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError, RangeError

__all__ = [
    "digit",
    "floor_log",
    "floor_log2",
    "reconstruct",
    "scaled_floor",
    "GENERAL_RADIX_SCALE_LIMIT",
]

# Scales beyond this window are rejected for radices other than 2; every
# digit of a finite double is zero well inside it, and the cap keeps the
# big-integer powers p**|k| from growing without purpose.
GENERAL_RADIX_SCALE_LIMIT = 900


def _split(x: float) -> tuple[int, int]:
    """Return (num, d) with x == num / 2**d exactly and d >= 0."""
    if math.isinf(x) or math.isnan(x):
        raise DomainError("value must be finite")
    num, den = x.as_integer_ratio()
    return num, den.bit_length() - 1


def floor_log2(x: float) -> int:
    """Largest integer e with 2**e <= x.  Exact for every positive float."""
    if not x > 0.0:
        raise DomainError("floor_log2 requires x > 0")
    num, d = _split(x)
    return num.bit_length() - 1 - d


def scaled_floor(x: float, k: int) -> int:
    """floor(x * 2**k) as an exact integer, valid for any finite x."""
    num, d = _split(x)
    s = k - d
    if s >= 0:
        return num << s
    return num >> -s  # arithmetic shift floors negatives correctly


def _check_radix(p: int) -> None:
    if not isinstance(p, int) or isinstance(p, bool) or p < 2:
        raise DomainError("radix p must be an integer >= 2")


def _floor_radix_scale(num: int, d: int, p: int, k: int) -> int:
    """floor((num / 2**d) / p**k) for num >= 0, as an exact integer."""
    if k >= 0:
        return num // (p**k << d)
    return (num * p**-k) >> d


def digit(p: int, k: int, x: float) -> int:
    """The digit of x at scale k in radix p.

    Scales outside the meaningful window simply return 0; only radices
    other than 2 enforce the documented |k| <= 900 validity window.
    """
    _check_radix(p)
    if not x >= 0.0:
        raise DomainError("digit requires x >= 0")
    num, d = _split(x)
    if p == 2:
        if num == 0:
            return 0
        lowest = (num & -num).bit_length() - 1 - d
        highest = num.bit_length() - 1 - d
        if k < lowest or k > highest:
            return 0
        return (num >> (k + d)) & 1
    if abs(k) > GENERAL_RADIX_SCALE_LIMIT:
        raise RangeError(
            f"scale k={k} outside the supported window "
            f"|k| <= {GENERAL_RADIX_SCALE_LIMIT} for radix {p}"
        )
    return _floor_radix_scale(num, d, p, k) - p * _floor_radix_scale(num, d, p, k + 1)


def floor_log(p: int, x: float) -> int:
    """Largest integer k with p**k <= x, by exact integer comparison."""
    _check_radix(p)
    if not x > 0.0:
        raise DomainError("floor_log requires x > 0")
    if p == 2:
        return floor_log2(x)
    num, d = _split(x)
    if x >= 1.0:
        k = 0
        # p**(k+1) <= num / 2**d  <=>  p**(k+1) << d <= num
        while (p ** (k + 1) << d) <= num:
            k += 1
        return k
    k = 0
    m = num
    # p**k <= num / 2**d  <=>  num * p**-k >= 2**d  (k <= 0 here)
    while m < (1 << d):
        m *= p
        k -= 1
    return k


def reconstruct(p: int, x: float, k_min: int) -> float:
    """Rebuild x from its radix-p digits at scales k_min..floor_log(p, |x|).

    Exact whenever the radix-p expansion of x terminates at or above
    k_min; otherwise the result is within p**(k_min + 1) of x.  The sign
    is reapplied after reconstructing |x|.
    """
    _check_radix(p)
    if math.isinf(x) or math.isnan(x):
        raise DomainError("value must be finite")
    if x == 0.0:
        return 0.0
    ax = abs(x)
    k_hi = floor_log(p, ax)
    if k_min > k_hi:
        raise DomainError(
            f"k_min={k_min} is above the leading scale {k_hi} of {ax!r}"
        )
    acc = 0
    for k in range(k_hi, k_min - 1, -1):
        acc = acc * p + digit(p, k, ax)
    # acc holds sum(digit_k * p**(k - k_min)); one correctly rounded
    # conversion at the end keeps terminating expansions exact.
    if k_min >= 0:
        value = float(acc * p**k_min)
    else:
        value = float(Fraction(acc, p**-k_min))
    return -value if x < 0.0 else value
