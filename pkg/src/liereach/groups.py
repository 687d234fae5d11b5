"""Matrix Lie group primitives: SO(3) and the torus SO(2)xSO(2).

Group elements are tuples of rotation blocks; tangent data lives in
coordinates on the Lie algebra (R^3 for SO(3), R^2 for the torus).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .intervals import IntervalVector, iv_cross3

__all__ = [
    "AngleAtCut",
    "GroupElement",
    "GroupModel",
    "SO3Model",
    "TorusModel",
    "TangentInterval",
    "ExpTangentInterval",
    "group_mul",
    "group_inv",
    "orthogonality_defect",
    "rot2",
    "so2_angle",
    "hat3",
    "vee3",
    "so3_exp",
    "so3_log",
]

# Below this rotation angle the exp/log coefficient functions switch to
# 4th-order series to avoid 0/0 cancellation.
SMALL_ANGLE = 1e-4

# Rotations closer than this to the pi cut have no well-conditioned log.
CUT_TOLERANCE = 1e-9


class AngleAtCut(Exception):
    """Rotation angle too close to pi for a principal logarithm."""


# -- SO(2) ------------------------------------------------------------------

def rot2(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def so2_angle(r: np.ndarray) -> float:
    """Principal angle of a planar rotation, in [-pi, pi].

    The sign at the boundary follows atan2: whichever of +/-pi has a sine
    bit-compatible with the matrix entry.
    """
    return float(np.arctan2(r[1, 0], r[0, 0]))


# -- SO(3) ------------------------------------------------------------------

def hat3(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def vee3(m: np.ndarray) -> np.ndarray:
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def so3_exp(v) -> np.ndarray:
    """Rotation matrix exp(hat(v)) via the axis-angle closed form."""
    v = np.asarray(v, dtype=np.float64)
    th2 = float(v @ v)
    th = np.sqrt(th2)
    if th < SMALL_ANGLE:
        a = 1.0 - th2 / 6.0 + th2 * th2 / 120.0
        b = 0.5 - th2 / 24.0 + th2 * th2 / 720.0
    else:
        a = np.sin(th) / th
        b = (1.0 - np.cos(th)) / th2
    k = hat3(v)
    return np.eye(3) + a * k + b * (k @ k)


def so3_log(r: np.ndarray) -> np.ndarray:
    """Principal logarithm coordinates of a rotation matrix.

    The angle comes from atan2 of the antisymmetric part against the trace,
    which stays accurate over the whole principal branch.  Raises AngleAtCut
    within CUT_TOLERANCE of the pi cut, where the axis is not recoverable
    from the antisymmetric part.
    """
    w = 0.5 * np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    s = float(np.linalg.norm(w))            # sin(theta) for theta in [0, pi]
    c = 0.5 * (float(np.trace(r)) - 1.0)    # cos(theta)
    th = float(np.arctan2(s, c))
    if th > np.pi - CUT_TOLERANCE:
        raise AngleAtCut(f"rotation angle {th} within {CUT_TOLERANCE} of pi")
    if th < SMALL_ANGLE:
        g = 1.0 + th * th / 6.0 + 7.0 * th ** 4 / 360.0
    else:
        g = th / s
    return g * w


# -- group elements ---------------------------------------------------------

def _frozen_block(b: np.ndarray) -> np.ndarray:
    out = np.array(b, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GroupElement:
    """Element of a product of rotation groups, one matrix block per factor."""

    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(_frozen_block(b) for b in self.blocks))


def group_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    if len(a.blocks) != len(b.blocks):
        raise ValueError("factor count mismatch")
    return GroupElement(tuple(x @ y for x, y in zip(a.blocks, b.blocks)))


def group_inv(a: GroupElement) -> GroupElement:
    return GroupElement(tuple(b.T for b in a.blocks))


def orthogonality_defect(a: GroupElement) -> float:
    """Max-norm deviation of B^T B from the identity over all blocks."""
    return max(float(np.abs(b.T @ b - np.eye(b.shape[0])).max()) for b in a.blocks)


# -- tangent boxes ----------------------------------------------------------

@dataclass(frozen=True)
class TangentInterval:
    """Coordinate box [lower, upper] in the Lie algebra."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = _frozen_block(np.atleast_1d(self.lower))
        hi = _frozen_block(np.atleast_1d(self.upper))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("bound shapes differ")
        if not np.all(lo <= hi):
            raise ValueError("empty tangent interval: some lower > upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def from_box(cls, box: IntervalVector) -> "TangentInterval":
        return cls(box.lo, box.hi)

    @property
    def box(self) -> IntervalVector:
        return IntervalVector(self.lower, self.upper)

    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    def width(self) -> np.ndarray:
        return self.upper - self.lower


@dataclass(frozen=True)
class ExpTangentInterval:
    """Set { center * exp(hat(v)) : v in box } on the group."""

    center: GroupElement
    box: TangentInterval


# -- group models ------------------------------------------------------------

class GroupModel:
    """Shared interface for the concrete groups.

    n        dimension of the Lie algebra coordinates
    abelian  True when all brackets vanish
    """

    name: str
    n: int
    abelian: bool

    def identity(self) -> GroupElement:
        raise NotImplementedError

    def hat(self, v) -> tuple:
        raise NotImplementedError

    def vee(self, blocks) -> np.ndarray:
        raise NotImplementedError

    def exp(self, v) -> GroupElement:
        raise NotImplementedError

    def log(self, g: GroupElement) -> np.ndarray:
        raise NotImplementedError

    def bracket(self, u, v) -> np.ndarray:
        raise NotImplementedError

    def bracket_iv(self, a: IntervalVector, b: IntervalVector) -> IntervalVector:
        raise NotImplementedError

    def box_in_injectivity(self, t: TangentInterval, margin: float = 1e-6) -> bool:
        """True when the whole box sits inside the injectivity region of exp."""
        raise NotImplementedError


class SO3Model(GroupModel):
    name = "so3"
    n = 3
    abelian = False

    def identity(self) -> GroupElement:
        return GroupElement((np.eye(3),))

    def hat(self, v) -> tuple:
        return (hat3(v),)

    def vee(self, blocks) -> np.ndarray:
        return vee3(blocks[0])

    def exp(self, v) -> GroupElement:
        return GroupElement((so3_exp(v),))

    def log(self, g: GroupElement) -> np.ndarray:
        return so3_log(g.blocks[0])

    def bracket(self, u, v) -> np.ndarray:
        return np.cross(np.asarray(u, dtype=np.float64), np.asarray(v, dtype=np.float64))

    def bracket_iv(self, a: IntervalVector, b: IntervalVector) -> IntervalVector:
        return iv_cross3(a, b)

    def box_in_injectivity(self, t: TangentInterval, margin: float = 1e-6) -> bool:
        # Injectivity region is the open norm ball of radius pi; the farthest
        # point of an axis-aligned box is the componentwise-largest corner.
        corner = np.maximum(np.abs(t.lower), np.abs(t.upper))
        return float(np.linalg.norm(corner)) < np.pi - margin


class TorusModel(GroupModel):
    name = "torus"
    n = 2
    abelian = True

    def identity(self) -> GroupElement:
        return GroupElement((np.eye(2), np.eye(2)))

    def hat(self, v) -> tuple:
        v = np.asarray(v, dtype=np.float64)
        return tuple(np.array([[0.0, -w], [w, 0.0]]) for w in v)

    def vee(self, blocks) -> np.ndarray:
        return np.array([b[1, 0] for b in blocks])

    def exp(self, v) -> GroupElement:
        v = np.asarray(v, dtype=np.float64)
        return GroupElement(tuple(rot2(w) for w in v))

    def log(self, g: GroupElement) -> np.ndarray:
        # atan2 gives the principal branch (-pi, pi]; the cut itself maps to pi.
        return np.array([so2_angle(b) for b in g.blocks])

    def bracket(self, u, v) -> np.ndarray:
        return np.zeros(2)

    def bracket_iv(self, a: IntervalVector, b: IntervalVector) -> IntervalVector:
        z = np.zeros(2)
        return IntervalVector(z, z)

    def box_in_injectivity(self, t: TangentInterval, margin: float = 1e-6) -> bool:
        # Injectivity region is the open box (-pi, pi) per factor.
        corner = np.maximum(np.abs(t.lower), np.abs(t.upper))
        return bool(np.all(corner < np.pi - margin))
