"""Monte-Carlo validation of reach tubes against a fine-step reference.

Sampled initial states and piecewise-constant disturbance realizations are
integrated with an RKMK4 reference scheme using the exact closed-form
inverse differential of exp (no series truncation), on a grid `substeps`
times finer than the tube grid.  Containment is then checked in canonical
coordinates at tube checkpoints.

Sampling is deterministic: sample i draws from a dedicated stream spawned as
SeedSequence(seed, spawn_key=(i,)), so reports are bit-identical for a given
seed and backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import ReachTube, SystemModel
from .groups import (
    AngleAtCut,
    ExpTangentInterval,
    GroupElement,
    TangentInterval,
    rot2,
    so2_angle,
    so3_exp,
    so3_log,
)
from .kernels import active_backend, so3_rollout, torus_rollout

__all__ = [
    "ValidationReport",
    "meshgrid_points",
    "uniform_points",
    "reference_integrate",
    "containment_check",
    "mc_validate",
]

# RK4 stage abscissae used by the reference integrator (pinned; the tube's
# tableau is irrelevant to the oracle).
_STAGE_C = np.array([0.0, 0.5, 0.5, 1.0])


def meshgrid_points(box: TangentInterval, k: int) -> np.ndarray:
    """Regular k-per-axis grid over the box, corners included; shape (k^n, n)."""
    if k < 2:
        raise ValueError("meshgrid needs at least 2 points per axis")
    axes = [np.linspace(box.lower[i], box.upper[i], k) for i in range(box.lower.shape[0])]
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1)


def uniform_points(box: TangentInterval, m: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(box.lower, box.upper, (m, box.lower.shape[0]))


def _stage_nominal(system: SystemModel, n_sub: int, h_sub: float, t0: float) -> np.ndarray:
    m = system.control_nominal(t0).shape[0]
    u = np.empty((n_sub, 4, m))
    for i in range(n_sub):
        for k in range(4):
            u[i, k] = system.control_nominal(t0 + (i + _STAGE_C[k]) * h_sub)
    return u


def _substep_count(t_final: float, h_ref: float) -> int:
    n = int(round(t_final / h_ref))
    if n < 1 or abs(n * h_ref - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise ValueError("t_final must be an integral number of reference steps")
    return n


def _rollout(system: SystemModel, x0: list, u_nom: np.ndarray, w: np.ndarray,
             substeps: int, h_sub: float, record_every: int) -> np.ndarray:
    """Dispatch a batch rollout by group; x0 is a list of GroupElement."""
    name = system.group.name
    if name == "so3":
        r0 = np.stack([x.blocks[0] for x in x0])
        return so3_rollout(r0, u_nom, w, substeps, h_sub, record_every)
    if name == "torus":
        a0 = np.stack([[so2_angle(b) for b in x.blocks] for x in x0])
        return torus_rollout(a0, u_nom, w, substeps, h_sub, record_every)
    raise ValueError(f"no reference kernel for group {name!r}")


def _states_at(system: SystemModel, raw: np.ndarray) -> GroupElement:
    if system.group.name == "so3":
        return GroupElement((raw,))
    return GroupElement(tuple(rot2(a) for a in raw))


def reference_integrate(system: SystemModel, x0: GroupElement, u_fn, t_final: float,
                        h_ref: float, t0: float = 0.0) -> list:
    """Single-trajectory reference rollout; returns GroupElements at every h_ref."""
    n_sub = _substep_count(t_final - t0, h_ref)
    m = np.asarray(u_fn(t0), dtype=np.float64).shape[0]
    u_nom = np.empty((n_sub, 4, m))
    for i in range(n_sub):
        for k in range(4):
            u_nom[i, k] = u_fn(t0 + (i + _STAGE_C[k]) * h_ref)
    w = np.zeros((1, n_sub, m))
    raw = _rollout(system, [x0], u_nom, w, 1, h_ref, 1)
    return [_states_at(system, raw[0, i]) for i in range(raw.shape[1])]


def _coordinates_in(entry_set: ExpTangentInterval, system: SystemModel, raw) -> np.ndarray:
    """Canonical coordinates of a raw kernel state relative to the entry center."""
    if system.group.name == "so3":
        return so3_log(entry_set.center.blocks[0].T @ raw)
    return np.array([
        so2_angle(entry_set.center.blocks[k].T @ rot2(raw[k]))
        for k in range(len(entry_set.center.blocks))
    ])


def _escape_margin(box: TangentInterval, v: np.ndarray) -> float:
    return float(max(0.0, np.max(box.lower - v), np.max(v - box.upper)))


def containment_check(tube: ReachTube, trajectory: list, checkpoints, slack: float = 1e-6):
    """Check one trajectory (GroupElements on the tube grid) at checkpoint indices.

    Returns (all_contained, details); each detail row carries the escape
    margin (0 when inside, +inf when the log is unavailable at the cut).
    """
    details = []
    ok = True
    for idx in checkpoints:
        entry = tube.entries[idx]
        x = trajectory[idx]
        try:
            v = _log_between(entry.set.center, x)
            margin = _escape_margin(entry.set.box, v)
            contained = entry.set.box.box.contains(v, slack)
        except AngleAtCut:
            margin = float("inf")
            contained = False
        ok = ok and contained
        details.append({"step": int(idx), "t": float(entry.t),
                        "contained": bool(contained), "margin": margin})
    return ok, details


def _log_between(center: GroupElement, x: GroupElement) -> np.ndarray:
    if len(center.blocks) == 1 and center.blocks[0].shape == (3, 3):
        return so3_log(center.blocks[0].T @ x.blocks[0])
    return np.array([so2_angle(c.T @ b) for c, b in zip(center.blocks, x.blocks)])


@dataclass
class ValidationReport:
    system: str
    backend: str
    seed: int
    slack: float
    substeps: int
    n_meshgrid: int
    n_uniform: int
    truncated_tube: bool
    checkpoint_steps: list = field(default_factory=list)
    checkpoint_times: list = field(default_factory=list)
    fractions: list = field(default_factory=list)
    first_violation: dict | None = None

    @property
    def n_samples(self) -> int:
        return self.n_meshgrid + self.n_uniform

    @property
    def passed(self) -> bool:
        return all(f == 1.0 for f in self.fractions)

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "backend": self.backend,
            "seed": self.seed,
            "slack": self.slack,
            "substeps": self.substeps,
            "samples": {"meshgrid": self.n_meshgrid, "uniform": self.n_uniform,
                        "total": self.n_samples},
            "truncated_tube": self.truncated_tube,
            "checkpoints": [
                {"step": int(s), "t": float(t), "fraction": float(f)}
                for s, t, f in zip(self.checkpoint_steps, self.checkpoint_times,
                                   self.fractions)
            ],
            "first_violation": self.first_violation,
            "passed": self.passed,
        }


def mc_validate(system: SystemModel, tube: ReachTube, seed: int, n_uniform: int,
                meshgrid_k: int = 0, n_checkpoints: int = 10, slack: float = 1e-6,
                substeps: int = 10) -> ValidationReport:
    """Sample the initial set, integrate references, and check tube containment."""
    n_avail = len(tube.entries) - 1
    init = tube.entries[0].set
    n = init.box.lower.shape[0]
    hw = system.control_halfwidth()
    m = hw.shape[0]

    n_mesh = meshgrid_k ** n if meshgrid_k else 0
    mesh = meshgrid_points(init.box, meshgrid_k) if meshgrid_k else np.empty((0, n))
    total = n_mesh + n_uniform

    report = ValidationReport(
        system=system.name, backend=active_backend(), seed=seed, slack=slack,
        substeps=substeps, n_meshgrid=n_mesh, n_uniform=n_uniform,
        truncated_tube=tube.truncated,
    )
    if n_avail < 1 or total == 0:
        return report

    w = np.empty((total, n_avail, m))
    v0 = np.empty((total, n))
    for sid in range(total):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(sid,)))
        if sid < n_mesh:
            v0[sid] = mesh[sid]
        else:
            v0[sid] = rng.uniform(init.box.lower, init.box.upper)
        w[sid] = rng.uniform(-hw, hw, (n_avail, m))

    x0 = [_compose(system, init.center, v0[sid]) for sid in range(total)]

    t0 = tube.entries[0].t
    h_sub = tube.h / substeps
    u_nom = _stage_nominal(system, n_avail * substeps, h_sub, t0)
    states = _rollout(system, x0, u_nom, w, substeps, h_sub, substeps)

    cp = np.unique(np.round(np.linspace(1, n_avail, min(n_checkpoints, n_avail))).astype(int))
    report.checkpoint_steps = [int(i) for i in cp]
    report.checkpoint_times = [float(tube.entries[i].t) for i in cp]

    first = None
    for idx in cp:
        entry = tube.entries[idx]
        inside = 0
        for sid in range(total):
            try:
                v = _coordinates_in(entry.set, system, states[sid, idx])
                margin = _escape_margin(entry.set.box, v)
                contained = entry.set.box.box.contains(v, slack)
            except AngleAtCut:
                margin = float("inf")
                contained = False
            if contained:
                inside += 1
            elif first is None:
                first = {"step": int(idx), "t": float(entry.t),
                         "sample": int(sid), "margin": margin}
        report.fractions.append(inside / total)
    report.first_violation = first
    return report


def _compose(system: SystemModel, center: GroupElement, v: np.ndarray) -> GroupElement:
    blocks = center.blocks
    exp_blocks = system.group.exp(v).blocks
    return GroupElement(tuple(c @ e for c, e in zip(blocks, exp_blocks)))
