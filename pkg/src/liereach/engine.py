"""Interval reachability stepping in exponential coordinates.

A reachable set is carried as ExpTangentInterval: a group-valued center plus
a coordinate box in the Lie algebra.  Each step integrates the box through
the lifted dynamics with an explicit Runge-Kutta tableau, in one of two modes:

  monotone   two coupled endpoint trajectories (valid when the lifted field
             is monotone on the current branch; checked per stage)
  embedding  a 2n-dimensional mixed-monotone embedding system built from an
             interval inclusion of the lifted field

After each step the box may be recentered: the center absorbs the box
midpoint and the box is pulled back through a truncated BCH enclosure.
A guard keeps every stored box inside the injectivity region of exp.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import (
    ExpTangentInterval,
    GroupElement,
    GroupModel,
    TangentInterval,
    group_mul,
)
from .intervals import IntervalVector
from .series import check_degree, dexpinv, interval_bch

__all__ = [
    "ButcherTableau",
    "RecenterPolicy",
    "ReachConfig",
    "SystemModel",
    "TubeEntry",
    "ReachTube",
    "ReachError",
    "InjectivityExceeded",
    "NonMonotoneStep",
    "BranchViolation",
    "OrderingViolation",
    "embedding_field",
    "recenter",
    "rkmk_step",
    "rkmk_reach",
]


class ReachError(Exception):
    """Base for abortable stepping errors; carries the failing step index."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step
        self.partial = None  # ReachTube attached by rkmk_reach


class InjectivityExceeded(ReachError):
    """Box left the injectivity region of exp."""


class NonMonotoneStep(ReachError):
    """Monotone stepping hypothesis failed at a stage."""


class BranchViolation(ReachError):
    """Flow field argument left the principal branch it was lifted on."""


class OrderingViolation(ReachError):
    """Embedding state lost the lower <= upper ordering."""


@dataclass(frozen=True, eq=False)
class ButcherTableau:
    """Explicit Runge-Kutta tableau (a strictly lower triangular)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, ButcherTableau):
            return NotImplemented
        return (np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)
                and np.array_equal(self.c, other.c))

    def __hash__(self):
        return hash((self.a.tobytes(), self.b.tobytes(), self.c.tobytes()))

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64)
        c = np.asarray(self.c, dtype=np.float64)
        nu = b.shape[0]
        if a.shape != (nu, nu) or c.shape != (nu,):
            raise ValueError("tableau shapes inconsistent")
        if np.any(a[np.triu_indices(nu)] != 0.0):
            raise ValueError("tableau must be strictly lower triangular (explicit)")
        if abs(float(b.sum()) - 1.0) > 1e-12:
            raise ValueError("tableau weights must sum to 1")
        if c[0] != 0.0:
            raise ValueError("first stage abscissa must be 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def stages(self) -> int:
        return self.b.shape[0]

    @classmethod
    def rk4(cls) -> "ButcherTableau":
        a = np.zeros((4, 4))
        a[1, 0] = 0.5
        a[2, 1] = 0.5
        a[3, 2] = 1.0
        return cls(a, np.array([1, 2, 2, 1]) / 6.0, np.array([0.0, 0.5, 0.5, 1.0]))

    @classmethod
    def euler(cls) -> "ButcherTableau":
        return cls(np.zeros((1, 1)), np.ones(1), np.zeros(1))


@dataclass(frozen=True)
class RecenterPolicy:
    """When to recenter: every step, never, or above a box-width threshold."""

    kind: str
    threshold: float = 0.0

    def __post_init__(self):
        if self.kind not in ("always", "never", "width"):
            raise ValueError(f"unknown recenter policy {self.kind!r}")
        if self.kind == "width" and not self.threshold > 0.0:
            raise ValueError("width policy needs a positive threshold")

    @classmethod
    def parse(cls, text: str) -> "RecenterPolicy":
        if text in ("always", "never"):
            return cls(text)
        if text.startswith("width:"):
            return cls("width", float(text.split(":", 1)[1]))
        raise ValueError(f"cannot parse recenter policy {text!r}")

    def should(self, box: TangentInterval) -> bool:
        if self.kind == "always":
            return True
        if self.kind == "never":
            return False
        return float(box.width().max()) > self.threshold


@dataclass(frozen=True)
class ReachConfig:
    h: float
    n_steps: int
    tableau: ButcherTableau
    mode: str
    recenter: RecenterPolicy
    order: int
    injectivity_margin: float = 1e-6

    def __post_init__(self):
        if not self.h > 0.0:
            raise ValueError("step size must be positive")
        if self.n_steps < 0:
            raise ValueError("step count must be nonnegative")
        if self.mode not in ("monotone", "embedding"):
            raise ValueError(f"unknown mode {self.mode!r}")
        check_degree(self.order)


class SystemModel:
    """Control system with left-trivialized dynamics on a group model."""

    group: GroupModel
    name: str

    def field(self, x: GroupElement, u: np.ndarray) -> np.ndarray:
        """Left-trivialized velocity at state x under control value u."""
        raise NotImplementedError

    def lifted_field(self, center: GroupElement, theta, u, degree: int) -> np.ndarray:
        """Field in exponential coordinates around center, truncated dexpinv."""
        x = group_mul(center, self.group.exp(theta))
        return dexpinv(self.group, theta, self.field(x, u), degree)

    def lifted_inclusion(self, center: GroupElement, theta_box: IntervalVector,
                         u_box: IntervalVector, degree: int) -> IntervalVector:
        """Interval inclusion of lifted_field over coordinate and control boxes."""
        raise NotImplementedError

    def monotone_check(self, center: GroupElement, box: TangentInterval):
        """True/False monotonicity certificate for the box, or None if untracked."""
        return None

    def control_nominal(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def control_halfwidth(self) -> np.ndarray:
        raise NotImplementedError

    def control_box(self, t: float) -> IntervalVector:
        u = self.control_nominal(t)
        w = self.control_halfwidth()
        return IntervalVector(u - w, u + w)


@dataclass(frozen=True)
class TubeEntry:
    n: int
    t: float
    set: ExpTangentInterval
    recentered: bool
    monotone: bool | None


@dataclass
class ReachTube:
    system: str
    h: float
    entries: list = field(default_factory=list)
    truncated: bool = False
    failure: str | None = None
    failed_step: int | None = None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def final(self) -> TubeEntry:
        return self.entries[-1]


def embedding_field(inclusion, vlo: np.ndarray, vhi: np.ndarray,
                    u_box: IntervalVector):
    """Mixed-monotone embedding field from an interval inclusion.

    Component i of the lower output evaluates the inclusion on the state box
    with coordinate i pinned at its lower bound; the upper output pins it at
    the upper bound.  Returns (dlo, dhi) arrays.
    """
    if np.any(vlo > vhi):
        raise OrderingViolation("embedding state ordering lost: some lower > upper")
    n = vlo.shape[0]
    dlo = np.empty(n)
    dhi = np.empty(n)
    for i in range(n):
        pin_hi = vhi.copy()
        pin_hi[i] = vlo[i]
        dlo[i] = inclusion(IntervalVector(vlo, pin_hi), u_box).lo[i]
        pin_lo = vlo.copy()
        pin_lo[i] = vhi[i]
        dhi[i] = inclusion(IntervalVector(pin_lo, vhi), u_box).hi[i]
    return dlo, dhi


def recenter(model: GroupModel, center: GroupElement, box: TangentInterval,
             degree: int):
    """Absorb the box midpoint into the center; pull the box back through BCH."""
    omega = box.midpoint()
    new_center = group_mul(center, model.exp(omega))
    new_box = interval_bch(model, -omega, box, degree)
    return new_center, new_box


def _stage_controls(system: SystemModel, t: float, h: float, c: np.ndarray):
    return [system.control_box(t + ck * h) for ck in c]


def _monotone_step(system: SystemModel, config: ReachConfig, center: GroupElement,
                   box: TangentInterval, t: float):
    a, b, c = config.tableau.a, config.tableau.b, config.tableau.c
    h, order = config.h, config.order
    u_boxes = _stage_controls(system, t, h, c)
    flo, fhi = [], []
    mono: bool | None = None
    for k in range(config.tableau.stages):
        olo = box.lower + sum(a[k, l] * flo[l] for l in range(k))
        ohi = box.upper + sum(a[k, l] * fhi[l] for l in range(k))
        if np.any(olo > ohi):
            raise NonMonotoneStep("stage endpoints crossed")
        check = system.monotone_check(center, TangentInterval(olo, ohi))
        if check is False:
            raise NonMonotoneStep(f"monotonicity certificate failed at stage {k}")
        if check is not None:
            mono = True if mono is None else (mono and check)
        flo.append(h * system.lifted_field(center, olo, u_boxes[k].lo, order))
        fhi.append(h * system.lifted_field(center, ohi, u_boxes[k].hi, order))
    new_lo = box.lower + sum(bl * f for bl, f in zip(b, flo))
    new_hi = box.upper + sum(bl * f for bl, f in zip(b, fhi))
    if np.any(new_lo > new_hi):
        raise NonMonotoneStep("updated endpoints crossed")
    return TangentInterval(new_lo, new_hi), mono


def _embedding_step(system: SystemModel, config: ReachConfig, center: GroupElement,
                    box: TangentInterval, t: float):
    a, b, c = config.tableau.a, config.tableau.b, config.tableau.c
    h, order = config.h, config.order

    def inclusion(vbox, ubox):
        return system.lifted_inclusion(center, vbox, ubox, order)

    u_boxes = _stage_controls(system, t, h, c)
    flo, fhi = [], []
    for k in range(config.tableau.stages):
        vlo = box.lower + sum(a[k, l] * flo[l] for l in range(k))
        vhi = box.upper + sum(a[k, l] * fhi[l] for l in range(k))
        dlo, dhi = embedding_field(inclusion, vlo, vhi, u_boxes[k])
        flo.append(h * dlo)
        fhi.append(h * dhi)
    new_lo = box.lower + sum(bl * f for bl, f in zip(b, flo))
    new_hi = box.upper + sum(bl * f for bl, f in zip(b, fhi))
    if np.any(new_lo > new_hi):
        raise OrderingViolation("updated embedding state lost ordering")
    return TangentInterval(new_lo, new_hi), None


def rkmk_step(system: SystemModel, config: ReachConfig, current: ExpTangentInterval,
              t: float):
    """One tableau step from the current set; returns (set, recentered, monotone)."""
    if config.mode == "monotone":
        box, mono = _monotone_step(system, config, current.center, current.box, t)
    else:
        box, mono = _embedding_step(system, config, current.center, current.box, t)
    model = system.group
    if not model.box_in_injectivity(box, config.injectivity_margin):
        raise InjectivityExceeded("updated box left the injectivity region")
    center = current.center
    recentered = False
    if config.recenter.should(box):
        center, box = recenter(model, center, box, config.order)
        recentered = True
        if not model.box_in_injectivity(box, config.injectivity_margin):
            raise InjectivityExceeded("recentered box left the injectivity region")
    return ExpTangentInterval(center, box), recentered, mono


def rkmk_reach(system: SystemModel, config: ReachConfig, init: ExpTangentInterval,
               t0: float = 0.0) -> ReachTube:
    """Integrate the reachable tube for n_steps; aborts carry the partial tube.

    On InjectivityExceeded / NonMonotoneStep / BranchViolation / Ordering-
    Violation the exception is re-raised with .step set to the index of the
    step being advanced and .partial holding the tube computed so far.
    """
    tube = ReachTube(system=system.name, h=config.h)
    if not system.group.box_in_injectivity(init.box, config.injectivity_margin):
        raise InjectivityExceeded("initial box outside the injectivity region", step=0)
    tube.entries.append(TubeEntry(0, t0, init, False, None))
    current = init
    for n in range(config.n_steps):
        t = t0 + n * config.h
        try:
            current, recentered, mono = rkmk_step(system, config, current, t)
        except ReachError as err:
            err.step = n
            tube.truncated = True
            tube.failure = type(err).__name__
            tube.failed_step = n
            err.partial = tube
            raise
        tube.entries.append(TubeEntry(n + 1, t0 + (n + 1) * config.h, current,
                                      recentered, mono))
    return tube
