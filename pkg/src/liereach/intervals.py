"""Closed-interval arithmetic over floats and float vectors.

Endpoints are plain double precision; no directed rounding is performed.
Downstream containment checks absorb endpoint roundoff in their slack.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Interval",
    "IntervalVector",
    "iv_add",
    "iv_sub",
    "iv_neg",
    "iv_mul",
    "iv_scale",
    "iv_cross3",
    "iv_contains",
    "iv_midpoint",
    "iv_width",
    "iv_subset",
]


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] of reals."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


class IntervalVector:
    """Axis-aligned box [lo, hi] in R^n, stored as a pair of float64 arrays."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = _freeze(np.atleast_1d(lo))
        hi = _freeze(np.atleast_1d(hi))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError(f"bound shapes differ: {lo.shape} vs {hi.shape}")
        if not np.all(lo <= hi):
            raise ValueError("empty box: some lo > hi")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("IntervalVector is immutable")

    @classmethod
    def point(cls, v) -> "IntervalVector":
        v = np.atleast_1d(np.asarray(v, dtype=np.float64))
        return cls(v, v)

    def __len__(self) -> int:
        return self.lo.shape[0]

    def __getitem__(self, i: int) -> Interval:
        return Interval(float(self.lo[i]), float(self.hi[i]))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntervalVector)
            and np.array_equal(self.lo, other.lo)
            and np.array_equal(self.hi, other.hi)
        )

    def __repr__(self) -> str:
        return f"IntervalVector({self.lo!r}, {self.hi!r})"

    def contains(self, x, slack: float = 0.0) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all(self.lo - slack <= x) and np.all(x <= self.hi + slack))

    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def width(self) -> np.ndarray:
        return self.hi - self.lo

    def corners(self) -> np.ndarray:
        """All 2^n corner points, shape (2^n, n)."""
        n = len(self)
        bounds = np.stack([self.lo, self.hi])
        idx = np.indices((2,) * n).reshape(n, -1).T
        return bounds[idx, np.arange(n)]


def _same_kind(a, b):
    if isinstance(a, Interval) != isinstance(b, Interval):
        raise TypeError("mixed Interval/IntervalVector operands")
    if isinstance(a, IntervalVector) and len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")


def _wrap(template, lo, hi):
    if isinstance(template, Interval):
        return Interval(float(lo), float(hi))
    return IntervalVector(lo, hi)


def iv_add(a, b):
    _same_kind(a, b)
    return _wrap(a, a.lo + b.lo, a.hi + b.hi)


def iv_sub(a, b):
    _same_kind(a, b)
    return _wrap(a, a.lo - b.hi, a.hi - b.lo)


def iv_neg(a):
    return _wrap(a, -np.asarray(a.hi), -np.asarray(a.lo))


def iv_mul(a, b):
    _same_kind(a, b)
    p = np.stack([
        np.asarray(a.lo) * b.lo,
        np.asarray(a.lo) * b.hi,
        np.asarray(a.hi) * b.lo,
        np.asarray(a.hi) * b.hi,
    ])
    return _wrap(a, p.min(axis=0), p.max(axis=0))


def iv_scale(a, c: float):
    c = float(c)
    if c >= 0.0:
        return _wrap(a, c * np.asarray(a.lo), c * np.asarray(a.hi))
    return _wrap(a, c * np.asarray(a.hi), c * np.asarray(a.lo))


def _mul4(alo, ahi, blo, bhi):
    p = np.stack([alo * blo, alo * bhi, ahi * blo, ahi * bhi])
    return p.min(axis=0), p.max(axis=0)


def iv_cross3(a: IntervalVector, b: IntervalVector) -> IntervalVector:
    """Interval enclosure of the cross product of two boxes in R^3."""
    if not (isinstance(a, IntervalVector) and isinstance(b, IntervalVector)):
        raise TypeError("iv_cross3 expects IntervalVector operands")
    if len(a) != 3 or len(b) != 3:
        raise ValueError("iv_cross3 requires 3-dimensional boxes")
    i = np.array([1, 2, 0])
    j = np.array([2, 0, 1])
    plo, phi = _mul4(a.lo[i], a.hi[i], b.lo[j], b.hi[j])
    qlo, qhi = _mul4(a.lo[j], a.hi[j], b.lo[i], b.hi[i])
    return IntervalVector(plo - qhi, phi - qlo)


def iv_contains(a, x, slack: float = 0.0) -> bool:
    return a.contains(x, slack)


def iv_midpoint(a):
    return a.mid if isinstance(a, Interval) else a.midpoint()


def iv_width(a):
    return a.width if isinstance(a, Interval) else a.width()


def iv_subset(a, b, slack: float = 0.0) -> bool:
    """True if a is contained in b, inflated by slack."""
    _same_kind(a, b)
    return bool(np.all(np.asarray(b.lo) - slack <= a.lo) and np.all(np.asarray(a.hi) <= np.asarray(b.hi) + slack))
