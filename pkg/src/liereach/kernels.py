"""Batched reference-integrator kernels with selectable backend.

The Monte-Carlo validator integrates hundreds of sampled trajectories with a
fine-step RKMK4 scheme; that loop dominates validation runtime.  Two
interchangeable implementations are provided:

  numba   scalar loops compiled with @njit (module _njit)
  numpy   the same math vectorized over the sample axis

Selection: the REACH_BACKEND environment variable ("auto", "numba", "numpy";
default "auto" prefers numba and falls back to numpy if it is unavailable),
or set_backend() at runtime.  Results agree to floating-point noise; each
backend is individually deterministic.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["active_backend", "set_backend", "so3_rollout", "torus_rollout"]

_BACKEND: str | None = None


def _resolve(choice: str) -> str:
    if choice == "numpy":
        return "numpy"
    if choice in ("auto", "numba"):
        try:
            from . import _njit  # noqa: F401  (import compiles lazily)
            return "numba"
        except Exception:
            if choice == "numba":
                raise RuntimeError("numba backend requested but numba is unavailable")
            return "numpy"
    raise ValueError(f"unknown backend {choice!r} (expected auto, numba or numpy)")


def active_backend() -> str:
    global _BACKEND
    if _BACKEND is None:
        _BACKEND = _resolve(os.environ.get("REACH_BACKEND", "auto"))
    return _BACKEND


def set_backend(choice: str) -> str:
    """Force a backend ("numba"/"numpy") or reset to environment with "auto"."""
    global _BACKEND
    if choice == "auto":
        _BACKEND = None
        return active_backend()
    _BACKEND = _resolve(choice)
    return _BACKEND


def _check_rollout_args(state0, u_nom, w, substeps, record_every):
    n_sub = u_nom.shape[0]
    if n_sub != w.shape[1] * substeps:
        raise ValueError("stage-control length must equal held-disturbance steps x substeps")
    if n_sub % record_every != 0:
        raise ValueError("record_every must divide the substep count")
    if state0.shape[0] != w.shape[0]:
        raise ValueError("batch sizes of initial states and disturbances differ")


def so3_rollout(r0: np.ndarray, u_nom: np.ndarray, w: np.ndarray, substeps: int,
                h: float, record_every: int) -> np.ndarray:
    """Integrate a batch of rotation trajectories; states every record_every substeps.

    r0 (S,3,3) initial rotations; u_nom (n_sub,4,3) nominal control at the
    four RK4 stage times of every substep; w (S,n_sub/substeps,3) disturbance
    held constant over each group of substeps.  Returns (S, n_sub/record_every+1, 3, 3).
    """
    r0 = np.ascontiguousarray(r0, dtype=np.float64)
    u_nom = np.ascontiguousarray(u_nom, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    _check_rollout_args(r0, u_nom, w, substeps, record_every)
    if active_backend() == "numba":
        from . import _njit
        return _njit.so3_rollout(r0, u_nom, w, substeps, h, record_every)
    return _so3_rollout_np(r0, u_nom, w, substeps, h, record_every)


def torus_rollout(a0: np.ndarray, u_nom: np.ndarray, w: np.ndarray, substeps: int,
                  h: float, record_every: int) -> np.ndarray:
    """Torus twin of so3_rollout on angle pairs; returns (S, n_rec+1, 2)."""
    a0 = np.ascontiguousarray(a0, dtype=np.float64)
    u_nom = np.ascontiguousarray(u_nom, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    _check_rollout_args(a0, u_nom, w, substeps, record_every)
    if active_backend() == "numba":
        from . import _njit
        return _njit.torus_rollout(a0, u_nom, w, substeps, h, record_every)
    return _torus_rollout_np(a0, u_nom, w, substeps, h, record_every)


# -- numpy twins --------------------------------------------------------------

def _dexpinv_cf_np(t: np.ndarray, a: np.ndarray) -> np.ndarray:
    t2 = np.einsum("sj,sj->s", t, t)
    b1 = np.cross(t, a)
    b2 = np.cross(t, b1)
    small = t2 < 1e-8
    th = np.sqrt(np.where(small, 1.0, t2))
    half = 0.5 * th
    c = np.where(small,
                 1.0 / 12.0 + t2 / 720.0,
                 (1.0 - half * np.cos(half) / np.sin(half)) / np.where(small, 1.0, t2))
    return a + 0.5 * b1 + c[:, None] * b2


def _rodrigues_np(t: np.ndarray) -> np.ndarray:
    s = t.shape[0]
    t2 = np.einsum("sj,sj->s", t, t)
    small = t2 < 1e-8
    th = np.sqrt(np.where(small, 1.0, t2))
    a = np.where(small, 1.0 - t2 / 6.0 + t2 * t2 / 120.0, np.sin(th) / th)
    b = np.where(small, 0.5 - t2 / 24.0 + t2 * t2 / 720.0,
                 (1.0 - np.cos(th)) / np.where(small, 1.0, t2))
    k = np.zeros((s, 3, 3))
    k[:, 0, 1] = -t[:, 2]
    k[:, 0, 2] = t[:, 1]
    k[:, 1, 0] = t[:, 2]
    k[:, 1, 2] = -t[:, 0]
    k[:, 2, 0] = -t[:, 1]
    k[:, 2, 1] = t[:, 0]
    k2 = np.einsum("si,sj->sij", t, t) - t2[:, None, None] * np.eye(3)[None]
    return np.eye(3)[None] + a[:, None, None] * k + b[:, None, None] * k2


def _so3_rollout_np(r0, u_nom, w, substeps, h, record_every):
    ns, n_sub = r0.shape[0], u_nom.shape[0]
    out = np.empty((ns, n_sub // record_every + 1, 3, 3))
    r = r0.copy()
    out[:, 0] = r
    for i in range(n_sub):
        wi = w[:, i // substeps]
        k1 = u_nom[i, 0][None] + wi
        k2 = _dexpinv_cf_np(0.5 * h * k1, u_nom[i, 1][None] + wi)
        k3 = _dexpinv_cf_np(0.5 * h * k2, u_nom[i, 2][None] + wi)
        k4 = _dexpinv_cf_np(h * k3, u_nom[i, 3][None] + wi)
        th = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        r = r @ _rodrigues_np(th)
        if (i + 1) % record_every == 0:
            out[:, (i + 1) // record_every] = r
    return out


def _wrap_np(x):
    return x - 2.0 * np.pi * np.rint(x / (2.0 * np.pi))


def _torus_rollout_np(a0, u_nom, w, substeps, h, record_every):
    ns, n_sub = a0.shape[0], u_nom.shape[0]
    out = np.empty((ns, n_sub // record_every + 1, 2))
    p = a0.copy()
    out[:, 0] = p
    flip = np.array([1.0, -1.0])
    for i in range(n_sub):
        wi = w[:, i // substeps]
        rel = _wrap_np(p[:, 1] - p[:, 0])
        k1 = u_nom[i, 0][None] + wi + rel[:, None] * flip
        q = p + 0.5 * h * k1
        rel = _wrap_np(q[:, 1] - q[:, 0])
        k2 = u_nom[i, 1][None] + wi + rel[:, None] * flip
        q = p + 0.5 * h * k2
        rel = _wrap_np(q[:, 1] - q[:, 0])
        k3 = u_nom[i, 2][None] + wi + rel[:, None] * flip
        q = p + h * k3
        rel = _wrap_np(q[:, 1] - q[:, 0])
        k4 = u_nom[i, 3][None] + wi + rel[:, None] * flip
        p = _wrap_np(p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
        if (i + 1) % record_every == 0:
            out[:, (i + 1) // record_every] = p
    return out
