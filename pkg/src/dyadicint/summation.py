"""Compensated accumulation for reproducible series summation.

The series engines add thousands of terms whose partial sums cancel
heavily, so a running float would lose digits in a way that depends on
magnitude ordering.  Neumaier's variant of Kahan summation keeps the
dropped low-order bits in a carry term and is immune to the classic
failure where the next addend is larger than the running sum.  All
additions happen in a fixed order, so totals are bit-reproducible.
"""

from __future__ import annotations


class NeumaierSum:
    """Running compensated sum.

    >>> acc = NeumaierSum()
    >>> for v in [1.0, 1e100, 1.0, -1e100]:
    ...     acc.add(v)
    >>> acc.total()
    2.0
    """

    __slots__ = ("_sum", "_carry")

    def __init__(self) -> None:
        self._sum = 0.0
        self._carry = 0.0

    def add(self, value: float) -> None:
        s = self._sum
        t = s + value
        # The branch picks whichever operand survived the rounding.
        if abs(s) >= abs(value):
            self._carry += (s - t) + value
        else:
            self._carry += (value - t) + s
        self._sum = t

    def total(self) -> float:
        return self._sum + self._carry


def compensated_sum(values) -> float:
    """Neumaier sum of an iterable, in iteration order."""
    acc = NeumaierSum()
    for v in values:
        acc.add(v)
    return acc.total()
