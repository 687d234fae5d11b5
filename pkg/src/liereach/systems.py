"""Concrete systems: torus consensus and SO(3) attitude under bounded control.

Both expose left-trivialized dynamics plus the lifted coordinate field and
its interval inclusion, in the form the stepping engine consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import (
    BranchViolation,
    ButcherTableau,
    ReachConfig,
    RecenterPolicy,
    SystemModel,
)
from .groups import (
    ExpTangentInterval,
    GroupElement,
    SO3Model,
    TangentInterval,
    TorusModel,
    so2_angle,
)
from .intervals import IntervalVector
from .series import dexpinv, interval_dexpinv

__all__ = [
    "TorusConsensus",
    "SO3Attitude",
    "attitude_command",
    "CaseStudy",
    "torus_consensus_case",
    "so3_attitude_case",
    "case_studies",
]


class TorusConsensus(SystemModel):
    """Two coupled phase oscillators on SO(2) x SO(2).

    Each factor advances at its own rate plus the principal relative angle to
    the other factor.  In coordinates theta around a center pair, the lifted
    field is linear:

        theta1' = u1 + (rel + theta2 - theta1)
        theta2' = u2 - (rel + theta2 - theta1)

    where rel is the principal relative angle between the center factors.
    The lift is only valid while the relative-angle argument stays inside
    (-pi, pi); leaving it raises BranchViolation.
    """

    name = "torus"

    def __init__(self, omega=(5.0, 2.0)):
        self.group = TorusModel()
        self.omega = np.asarray(omega, dtype=np.float64)

    @staticmethod
    def _relative_angle(x: GroupElement) -> float:
        return so2_angle(x.blocks[1] @ x.blocks[0].T)

    def field(self, x: GroupElement, u: np.ndarray) -> np.ndarray:
        rel = self._relative_angle(x)
        return np.array([u[0] + rel, u[1] - rel])

    def lifted_field(self, center, theta, u, degree: int) -> np.ndarray:
        # Keep the relative-angle argument as a real number: the centers may
        # wind arbitrarily, but rel + theta2 - theta1 must stay on the branch.
        rel = self._relative_angle(center)
        theta = np.asarray(theta, dtype=np.float64)
        arg = rel + theta[1] - theta[0]
        if abs(arg) >= np.pi:
            raise BranchViolation(f"relative angle {arg} outside (-pi, pi)")
        return np.array([u[0] + arg, u[1] - arg])

    def lifted_inclusion(self, center, theta_box: IntervalVector,
                         u_box: IntervalVector, degree: int) -> IntervalVector:
        rel = self._relative_angle(center)
        alo = rel + theta_box.lo[1] - theta_box.hi[0]
        ahi = rel + theta_box.hi[1] - theta_box.lo[0]
        if alo <= -np.pi or ahi >= np.pi:
            raise BranchViolation(f"relative angle range [{alo}, {ahi}] leaves (-pi, pi)")
        return IntervalVector(
            [u_box.lo[0] + alo, u_box.lo[1] - ahi],
            [u_box.hi[0] + ahi, u_box.hi[1] - alo],
        )

    def monotone_check(self, center, box: TangentInterval) -> bool:
        # Off-diagonal coupling has coefficient +1, so the lifted field is
        # monotone exactly while every corner keeps the argument on-branch.
        rel = self._relative_angle(center)
        for t1 in (box.lower[0], box.upper[0]):
            for t2 in (box.lower[1], box.upper[1]):
                if not (-np.pi < rel + t2 - t1 < np.pi):
                    return False
        return True

    def control_nominal(self, t: float) -> np.ndarray:
        return self.omega.copy()

    def control_halfwidth(self) -> np.ndarray:
        return np.zeros(2)


def attitude_command(t):
    """Nominal angular-velocity command: linear spin-down, quadratic decay, sine."""
    return np.array([(5.0 - t) / 5.0, 1.0 - (t / 5.0) ** 2, np.sin(0.5 * np.pi * t)])


class SO3Attitude(SystemModel):
    """Rigid-body attitude kinematics driven by a disturbed velocity command.

    The left-trivialized field is the body angular velocity itself:
    u(t) = nominal(t) + w with w held in a symmetric box.
    """

    name = "so3"

    def __init__(self, nominal=attitude_command, halfwidth=0.01):
        self.group = SO3Model()
        self.nominal = nominal
        self._halfwidth = np.broadcast_to(np.asarray(halfwidth, dtype=np.float64), (3,)).copy()

    def field(self, x: GroupElement, u: np.ndarray) -> np.ndarray:
        return np.asarray(u, dtype=np.float64)

    def lifted_field(self, center, theta, u, degree: int) -> np.ndarray:
        return dexpinv(self.group, theta, u, degree)

    def lifted_inclusion(self, center, theta_box: IntervalVector,
                         u_box: IntervalVector, degree: int) -> IntervalVector:
        return interval_dexpinv(self.group, theta_box, u_box, degree)

    def control_nominal(self, t: float) -> np.ndarray:
        return np.asarray(self.nominal(t), dtype=np.float64)

    def control_halfwidth(self) -> np.ndarray:
        return self._halfwidth.copy()


@dataclass(frozen=True)
class CaseStudy:
    name: str
    system: SystemModel
    config: ReachConfig
    init: ExpTangentInterval
    t_final: float


def torus_consensus_case() -> CaseStudy:
    system = TorusConsensus(omega=(5.0, 2.0))
    config = ReachConfig(
        h=0.01,
        n_steps=300,
        tableau=ButcherTableau.rk4(),
        mode="monotone",
        recenter=RecenterPolicy("always"),
        order=3,
    )
    center = system.group.exp([np.pi / 2.0, np.pi])
    init = ExpTangentInterval(center, TangentInterval([-0.6, -0.1], [0.6, 0.1]))
    return CaseStudy("torus", system, config, init, t_final=3.0)


def so3_attitude_case(recenter: str = "always", order: int = 3) -> CaseStudy:
    system = SO3Attitude(nominal=attitude_command, halfwidth=0.01)
    config = ReachConfig(
        h=0.01,
        n_steps=500,
        tableau=ButcherTableau.rk4(),
        mode="embedding",
        recenter=RecenterPolicy.parse(recenter),
        order=order,
    )
    init = ExpTangentInterval(
        system.group.identity(),
        TangentInterval([-0.01, -0.01, -0.01], [0.01, 0.01, 0.01]),
    )
    return CaseStudy("so3", system, config, init, t_final=5.0)


def case_studies() -> dict:
    return {"torus": torus_consensus_case(), "so3": so3_attitude_case()}
