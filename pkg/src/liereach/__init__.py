"""Interval reachability for control systems on matrix Lie groups."""

from .engine import (
    BranchViolation,
    ButcherTableau,
    InjectivityExceeded,
    NonMonotoneStep,
    OrderingViolation,
    ReachConfig,
    ReachError,
    ReachTube,
    RecenterPolicy,
    SystemModel,
    TubeEntry,
    embedding_field,
    recenter,
    rkmk_reach,
    rkmk_step,
)
from .groups import (
    AngleAtCut,
    ExpTangentInterval,
    GroupElement,
    GroupModel,
    SO3Model,
    TangentInterval,
    TorusModel,
    group_inv,
    group_mul,
    orthogonality_defect,
)
from .intervals import Interval, IntervalVector
from .series import bch, dexp, dexpinv, interval_bch, interval_dexpinv
from .systems import (
    CaseStudy,
    SO3Attitude,
    TorusConsensus,
    attitude_command,
    case_studies,
    so3_attitude_case,
    torus_consensus_case,
)
from .validation import (
    ValidationReport,
    containment_check,
    mc_validate,
    meshgrid_points,
    reference_integrate,
    uniform_points,
)

__version__ = "0.1.0"
