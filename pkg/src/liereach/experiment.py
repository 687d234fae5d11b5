"""Experiment configuration files: schema checks and case construction."""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .engine import ButcherTableau, ReachConfig, RecenterPolicy
from .groups import ExpTangentInterval, TangentInterval
from .systems import CaseStudy, SO3Attitude, TorusConsensus, attitude_command

__all__ = ["load_config", "build_case", "bundled_config_path"]

_COMMON_KEYS = {"system", "center", "init_lower", "init_upper", "h", "t_final",
                "tableau", "mode", "recenter", "order"}
_SYSTEM_KEYS = {
    "torus": _COMMON_KEYS | {"omega"},
    "so3": _COMMON_KEYS | {"control", "disturbance"},
}
_REQUIRED = {"system", "init_lower", "init_upper", "h", "t_final", "mode", "recenter"}

_TABLEAUS = {"rk4": ButcherTableau.rk4, "euler": ButcherTableau.euler}


def bundled_config_path(name: str):
    """Filesystem path of a packaged experiment config ("torus", "so3", ...)."""
    return resources.files("liereach").joinpath(f"configs/{name}.json")


def load_config(source) -> dict:
    """Load a config dict from a path or a bundled config name."""
    import os
    if isinstance(source, dict):
        return dict(source)
    if not os.path.exists(source):
        bundled = bundled_config_path(str(source))
        if bundled.is_file():
            return json.loads(bundled.read_text())
        raise FileNotFoundError(f"no config file or bundled config named {source!r}")
    with open(source) as f:
        return json.load(f)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(f"config error: {message}")


def build_case(cfg: dict) -> CaseStudy:
    """Validate a config dict and build the runnable case."""
    system_name = cfg.get("system")
    _require(system_name in _SYSTEM_KEYS, f"system must be one of {sorted(_SYSTEM_KEYS)}")
    unknown = set(cfg) - _SYSTEM_KEYS[system_name]
    _require(not unknown, f"unknown keys {sorted(unknown)}")
    missing = _REQUIRED - set(cfg)
    _require(not missing, f"missing keys {sorted(missing)}")

    if system_name == "torus":
        omega = np.asarray(cfg.get("omega", [5.0, 2.0]), dtype=np.float64)
        _require(omega.shape == (2,), "omega must hold two rates")
        system = TorusConsensus(omega=omega)
        n = 2
    else:
        control = cfg.get("control", "command")
        if control == "command":
            nominal = attitude_command
        else:
            const = np.asarray(control, dtype=np.float64)
            _require(const.shape == (3,), 'control must be "command" or a 3-vector')
            nominal = lambda t, _c=const: _c  # noqa: E731
        system = SO3Attitude(nominal=nominal, halfwidth=cfg.get("disturbance", 0.01))
        n = 3

    lower = np.asarray(cfg["init_lower"], dtype=np.float64)
    upper = np.asarray(cfg["init_upper"], dtype=np.float64)
    _require(lower.shape == (n,) and upper.shape == (n,),
             f"initial bounds must have {n} components")
    box = TangentInterval(lower, upper)

    center_coords = np.asarray(cfg.get("center", np.zeros(n)), dtype=np.float64)
    _require(center_coords.shape == (n,), f"center must have {n} coordinates")
    init = ExpTangentInterval(system.group.exp(center_coords), box)

    h = float(cfg["h"])
    t_final = float(cfg["t_final"])
    _require(h > 0.0, "h must be positive")
    n_steps = int(round(t_final / h))
    _require(n_steps >= 0 and abs(n_steps * h - t_final) <= 1e-9 * max(1.0, t_final),
             "t_final must be an integral number of steps")

    tableau_name = cfg.get("tableau", "rk4")
    _require(tableau_name in _TABLEAUS, f"tableau must be one of {sorted(_TABLEAUS)}")

    config = ReachConfig(
        h=h,
        n_steps=n_steps,
        tableau=_TABLEAUS[tableau_name](),
        mode=cfg["mode"],
        recenter=RecenterPolicy.parse(cfg["recenter"]),
        order=int(cfg.get("order", 3)),
    )
    return CaseStudy(system_name, system, config, init, t_final)
