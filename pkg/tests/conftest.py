"""Shared fixtures and independent numerical oracles for the test suite."""

import numpy as np
import pytest

from liereach.groups import SO3Model, TangentInterval, TorusModel

# Verdict lines recorded by the acceptance tests; echoed after the run so
# they stay visible under output capture (one line per criterion).
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def so3():
    return SO3Model()


@pytest.fixture
def torus():
    return TorusModel()


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


def random_box(rng, n, center_scale=0.5, width_scale=0.2):
    """Random tangent interval with bounded midpoint and width."""
    mid = rng.uniform(-center_scale, center_scale, n)
    half = rng.uniform(0.0, width_scale, n) / 2.0
    return TangentInterval(mid - half, mid + half)


def so3_dexpinv_exact(theta, a):
    """Closed-form inverse differential of exp on rotations.

    dexpinv_theta(a) = a + (1/2) theta x a + c(|theta|) theta x (theta x a)
    with c(t) = (1 - (t/2) cot(t/2)) / t^2, analytic at t = 0.
    """
    theta = np.asarray(theta, dtype=float)
    a = np.asarray(a, dtype=float)
    t2 = float(theta @ theta)
    if t2 < 1e-12:
        c = 1.0 / 12.0 + t2 / 720.0
    else:
        t = np.sqrt(t2)
        half = 0.5 * t
        c = (1.0 - half * np.cos(half) / np.sin(half)) / t2
    return a + 0.5 * np.cross(theta, a) + c * np.cross(theta, np.cross(theta, a))


def rotation_distance(r1, r2):
    """Geodesic angle between two rotation matrices."""
    cos = (np.trace(r1.T @ r2) - 1.0) / 2.0
    return float(np.arccos(np.clip(cos, -1.0, 1.0)))
