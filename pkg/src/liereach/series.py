"""Truncated differential-of-exp and BCH maps in Lie algebra coordinates.

All maps act on coordinates and take a truncation degree counting the total
polynomial degree of the retained terms:

  degree 2:  dexpinv(T, A) = A + 1/2 [T, A]
             dexp(T, A)    = A - 1/2 [T, A]
             bch(X, Y)     = X + Y + 1/2 [X, Y]
  degree 3:  adds  1/12 [T, [T, A]]   resp.  1/6 [T, [T, A]]
             and   1/12 [X, [X, Y]] - 1/12 [Y, [X, Y]]

On abelian models every bracket vanishes and the maps are exact: dexp and
dexpinv are the identity, bch is plain addition.

Interval versions evaluate the same polynomials by natural inclusion, each
occurrence of an input box widened independently, so the result encloses the
pointwise image of the truncated map.
"""

from __future__ import annotations

import numpy as np

from .groups import GroupModel, TangentInterval
from .intervals import IntervalVector, iv_add, iv_scale, iv_sub

__all__ = [
    "check_degree",
    "dexp",
    "dexpinv",
    "bch",
    "interval_dexpinv",
    "interval_bch",
]

SUPPORTED_DEGREES = (2, 3)


def check_degree(degree: int) -> int:
    if degree not in SUPPORTED_DEGREES:
        raise ValueError(f"truncation degree must be one of {SUPPORTED_DEGREES}, got {degree}")
    return degree


def dexpinv(model: GroupModel, theta, a, degree: int) -> np.ndarray:
    """Inverse differential of exp at theta applied to a, truncated."""
    check_degree(degree)
    a = np.asarray(a, dtype=np.float64)
    if model.abelian:
        return a.copy()
    br = model.bracket(theta, a)
    out = a + 0.5 * br
    if degree >= 3:
        out = out + model.bracket(theta, br) / 12.0
    return out


def dexp(model: GroupModel, theta, a, degree: int) -> np.ndarray:
    """Differential of exp at theta applied to a, truncated."""
    check_degree(degree)
    a = np.asarray(a, dtype=np.float64)
    if model.abelian:
        return a.copy()
    br = model.bracket(theta, a)
    out = a - 0.5 * br
    if degree >= 3:
        out = out + model.bracket(theta, br) / 6.0
    return out


def bch(model: GroupModel, x, y, degree: int) -> np.ndarray:
    """Truncated Baker-Campbell-Hausdorff composition z with exp(x)exp(y) ~ exp(z)."""
    check_degree(degree)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if model.abelian:
        return x + y
    br = model.bracket(x, y)
    out = x + y + 0.5 * br
    if degree >= 3:
        out = out + model.bracket(x, br) / 12.0 - model.bracket(y, br) / 12.0
    return out


def interval_dexpinv(model: GroupModel, theta_box: IntervalVector, a_box: IntervalVector,
                     degree: int) -> IntervalVector:
    """Enclosure of dexpinv over a box of base points and a box of arguments."""
    check_degree(degree)
    if model.abelian:
        return IntervalVector(a_box.lo, a_box.hi)
    br = model.bracket_iv(theta_box, a_box)
    out = iv_add(a_box, iv_scale(br, 0.5))
    if degree >= 3:
        out = iv_add(out, iv_scale(model.bracket_iv(theta_box, br), 1.0 / 12.0))
    return out


def interval_bch(model: GroupModel, theta_c, box: TangentInterval, degree: int) -> TangentInterval:
    """Enclosure of { bch(v, theta_c) : v in box } at the given degree.

    theta_c is a point; on abelian models the result is the exact translate
    of the box by theta_c.
    """
    check_degree(degree)
    theta_c = np.asarray(theta_c, dtype=np.float64)
    if model.abelian:
        return TangentInterval(box.lower + theta_c, box.upper + theta_c)
    x = box.box
    y = IntervalVector.point(theta_c)
    br = model.bracket_iv(x, y)
    out = iv_add(iv_add(x, y), iv_scale(br, 0.5))
    if degree >= 3:
        out = iv_add(out, iv_scale(model.bracket_iv(x, br), 1.0 / 12.0))
        out = iv_sub(out, iv_scale(model.bracket_iv(y, br), 1.0 / 12.0))
    return TangentInterval(out.lo, out.hi)
