"""Compiled batched rollout kernels for the validation reference integrator.

Scalar-explicit implementations of the RKMK4 reference step with the exact
(closed-form) inverse differential of exp, compiled with numba.  The numpy
twins live in kernels.py; both must agree to tight tolerance.
"""

import numpy as np
from numba import njit

_TWO_PI = 2.0 * np.pi


@njit(cache=True)
def _dexpinv_cf(tx, ty, tz, ax, ay, az):
    # Exact dexpinv on so(3): A + 1/2 T x A + c(|T|) T x (T x A),
    # c(t) = (1 - (t/2) cot(t/2)) / t^2, with its small-angle series.
    t2 = tx * tx + ty * ty + tz * tz
    b1x = ty * az - tz * ay
    b1y = tz * ax - tx * az
    b1z = tx * ay - ty * ax
    b2x = ty * b1z - tz * b1y
    b2y = tz * b1x - tx * b1z
    b2z = tx * b1y - ty * b1x
    if t2 < 1e-8:
        c = 1.0 / 12.0 + t2 / 720.0
    else:
        th = np.sqrt(t2)
        half = 0.5 * th
        c = (1.0 - half * np.cos(half) / np.sin(half)) / t2
    return ax + 0.5 * b1x + c * b2x, ay + 0.5 * b1y + c * b2y, az + 0.5 * b1z + c * b2z


@njit(cache=True)
def _rodrigues(tx, ty, tz, e):
    # e <- I + a K + b K^2 with K = hat(t), K^2 = t t^T - |t|^2 I.
    t2 = tx * tx + ty * ty + tz * tz
    if t2 < 1e-8:
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0
    else:
        th = np.sqrt(t2)
        a = np.sin(th) / th
        b = (1.0 - np.cos(th)) / t2
    e[0, 0] = 1.0 + b * (tx * tx - t2)
    e[0, 1] = -a * tz + b * tx * ty
    e[0, 2] = a * ty + b * tx * tz
    e[1, 0] = a * tz + b * tx * ty
    e[1, 1] = 1.0 + b * (ty * ty - t2)
    e[1, 2] = -a * tx + b * ty * tz
    e[2, 0] = -a * ty + b * tx * tz
    e[2, 1] = a * tx + b * ty * tz
    e[2, 2] = 1.0 + b * (tz * tz - t2)


@njit(cache=True)
def so3_rollout(r0, u_nom, w, substeps, h, record_every):
    ns = r0.shape[0]
    n_sub = u_nom.shape[0]
    n_rec = n_sub // record_every
    out = np.empty((ns, n_rec + 1, 3, 3))
    e = np.empty((3, 3))
    rn = np.empty((3, 3))
    for s in range(ns):
        r = r0[s].copy()
        out[s, 0] = r
        for i in range(n_sub):
            j = i // substeps
            wx = w[s, j, 0]
            wy = w[s, j, 1]
            wz = w[s, j, 2]
            k1x = u_nom[i, 0, 0] + wx
            k1y = u_nom[i, 0, 1] + wy
            k1z = u_nom[i, 0, 2] + wz
            k2x, k2y, k2z = _dexpinv_cf(
                0.5 * h * k1x, 0.5 * h * k1y, 0.5 * h * k1z,
                u_nom[i, 1, 0] + wx, u_nom[i, 1, 1] + wy, u_nom[i, 1, 2] + wz)
            k3x, k3y, k3z = _dexpinv_cf(
                0.5 * h * k2x, 0.5 * h * k2y, 0.5 * h * k2z,
                u_nom[i, 2, 0] + wx, u_nom[i, 2, 1] + wy, u_nom[i, 2, 2] + wz)
            k4x, k4y, k4z = _dexpinv_cf(
                h * k3x, h * k3y, h * k3z,
                u_nom[i, 3, 0] + wx, u_nom[i, 3, 1] + wy, u_nom[i, 3, 2] + wz)
            thx = h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            thy = h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            thz = h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
            _rodrigues(thx, thy, thz, e)
            for p in range(3):
                a0 = r[p, 0]
                a1 = r[p, 1]
                a2 = r[p, 2]
                rn[p, 0] = a0 * e[0, 0] + a1 * e[1, 0] + a2 * e[2, 0]
                rn[p, 1] = a0 * e[0, 1] + a1 * e[1, 1] + a2 * e[2, 1]
                rn[p, 2] = a0 * e[0, 2] + a1 * e[1, 2] + a2 * e[2, 2]
            r[:, :] = rn
            if (i + 1) % record_every == 0:
                out[s, (i + 1) // record_every] = r
    return out


@njit(cache=True)
def _wrap(x):
    return x - _TWO_PI * np.rint(x / _TWO_PI)


@njit(cache=True)
def torus_rollout(a0, u_nom, w, substeps, h, record_every):
    ns = a0.shape[0]
    n_sub = u_nom.shape[0]
    n_rec = n_sub // record_every
    out = np.empty((ns, n_rec + 1, 2))
    for s in range(ns):
        p1 = a0[s, 0]
        p2 = a0[s, 1]
        out[s, 0, 0] = p1
        out[s, 0, 1] = p2
        for i in range(n_sub):
            j = i // substeps
            w1 = w[s, j, 0]
            w2 = w[s, j, 1]

            rel = _wrap(p2 - p1)
            k11 = u_nom[i, 0, 0] + w1 + rel
            k12 = u_nom[i, 0, 1] + w2 - rel

            rel = _wrap(p2 + 0.5 * h * k12 - p1 - 0.5 * h * k11)
            k21 = u_nom[i, 1, 0] + w1 + rel
            k22 = u_nom[i, 1, 1] + w2 - rel

            rel = _wrap(p2 + 0.5 * h * k22 - p1 - 0.5 * h * k21)
            k31 = u_nom[i, 2, 0] + w1 + rel
            k32 = u_nom[i, 2, 1] + w2 - rel

            rel = _wrap(p2 + h * k32 - p1 - h * k31)
            k41 = u_nom[i, 3, 0] + w1 + rel
            k42 = u_nom[i, 3, 1] + w2 - rel

            p1 = _wrap(p1 + h / 6.0 * (k11 + 2.0 * k21 + 2.0 * k31 + k41))
            p2 = _wrap(p2 + h / 6.0 * (k12 + 2.0 * k22 + 2.0 * k32 + k42))
            if (i + 1) % record_every == 0:
                out[s, (i + 1) // record_every, 0] = p1
                out[s, (i + 1) // record_every, 1] = p2
    return out
