"""Tube and report files.

Tubes are JSON Lines: one object per step with the center blocks (row-major,
one flat list per factor), the coordinate bounds, and the step flags.  A
truncated run appends a final marker object {"truncated": true, ...}.
Floats are written with repr semantics, so a read back reproduces every
value bit for bit.
"""

from __future__ import annotations

import json

import numpy as np

from .engine import ReachTube, TubeEntry
from .groups import ExpTangentInterval, GroupElement, TangentInterval

__all__ = ["write_tube", "read_tube", "write_report", "read_report"]

_BLOCK_SIDES = {4: 2, 9: 3}


def _entry_record(e: TubeEntry) -> dict:
    return {
        "n": e.n,
        "t": e.t,
        "center": [list(map(float, b.ravel())) for b in e.set.center.blocks],
        "theta_lower": list(map(float, e.set.box.lower)),
        "theta_upper": list(map(float, e.set.box.upper)),
        "recentered": e.recentered,
        "monotone_check": e.monotone,
    }


def write_tube(path, tube: ReachTube) -> None:
    with open(path, "w") as f:
        for e in tube.entries:
            f.write(json.dumps(_entry_record(e)) + "\n")
        if tube.truncated:
            f.write(json.dumps({"truncated": True, "failure": tube.failure,
                                "failed_step": tube.failed_step}) + "\n")


def _block_from(flat: list) -> np.ndarray:
    side = _BLOCK_SIDES.get(len(flat))
    if side is None:
        raise ValueError(f"unrecognized center block of length {len(flat)}")
    return np.array(flat, dtype=np.float64).reshape(side, side)


def read_tube(path) -> ReachTube:
    entries = []
    truncated = False
    failure = None
    failed_step = None
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec.get("truncated"):
                truncated = True
                failure = rec.get("failure")
                failed_step = rec.get("failed_step")
                continue
            center = GroupElement(tuple(_block_from(b) for b in rec["center"]))
            box = TangentInterval(rec["theta_lower"], rec["theta_upper"])
            entries.append(TubeEntry(rec["n"], rec["t"], ExpTangentInterval(center, box),
                                     rec["recentered"], rec["monotone_check"]))
    if not entries:
        raise ValueError(f"tube file {path} holds no step records")
    system = "so3" if entries[0].set.center.blocks[0].shape == (3, 3) else "torus"
    h = entries[1].t - entries[0].t if len(entries) > 1 else 0.0
    return ReachTube(system=system, h=h, entries=entries, truncated=truncated,
                     failure=failure, failed_step=failed_step)


def write_report(path, report) -> None:
    payload = report.to_dict() if hasattr(report, "to_dict") else report
    with open(path, "w") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def read_report(path) -> dict:
    with open(path) as f:
        return json.load(f)
