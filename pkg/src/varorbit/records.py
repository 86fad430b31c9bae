"""Orbit record and trajectory file formats.

Orbit records are JSON with the group definition embedded, so a record is
self-contained. Floats are serialized with repr (shortest exact
round-trip), which guarantees bit-identical coefficients after a
write/read cycle.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGenerator, ShapeError
from .groups import SymmetryGroup, group_from_dict
from .paths import FourierPath, QuadratureParams, extend_to_full_period


def group_to_dict(group: SymmetryGroup) -> dict:
    """Re-emit a loadable definition for a classified group."""
    sys_ = group.system

    def spatial(g):
        return {"perm": [p + 1 for p in g.perm],
                "mat": [list(row) for row in g.mat]}

    gens = {}
    if group.gtype == "cyclic":
        if group.l > 1:
            gens["r"] = spatial(group.r)
    elif group.gtype == "brake":
        gens["h0"] = spatial(group.h0)
    else:
        gens["h0"] = spatial(group.h0)
        gens["h1"] = spatial(group.h1)
    return {
        "name": group.name,
        "n": sys_.n,
        "d": sys_.d,
        "alpha": sys_.alpha,
        "masses": list(sys_.raw_masses),
        "action_type": group.gtype,
        "kernel_generators": [
            spatial(g) for g in group.kernel if not all(
                p == i for i, p in enumerate(g.perm))
            or np.max(np.abs(g.mat - np.eye(sys_.d))) > 1e-12
        ],
        "generators": gens,
        "l": group.l,
    }


@dataclass
class OrbitRecord:
    group: SymmetryGroup
    path: FourierPath
    nu: int
    action: float
    grad_norm: float
    min_distance: float

    def to_dict(self) -> dict:
        nd = self.group.system.n * self.group.system.d
        return {
            "group": group_to_dict(self.group),
            "s": self.path.s,
            "nu": self.nu,
            "coeffs": [list(map(float, b)) for b in
                       self.path.coeffs.reshape(self.path.s + 2, nd)],
            "action": self.action,
            "grad_norm": self.grad_norm,
            "min_distance": self.min_distance,
        }

    @staticmethod
    def from_dict(data: dict) -> "OrbitRecord":
        try:
            group = group_from_dict(data["group"])
            s = int(data["s"])
            nu = int(data["nu"])
            coeffs = np.array(data["coeffs"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidGenerator(f"orbit record: bad field: {exc}") from exc
        n, d = group.system.n, group.system.d
        if coeffs.shape != (s + 2, n * d):
            raise ShapeError(
                f"coeffs shape {coeffs.shape}, expected ({s + 2}, {n * d})"
            )
        path = FourierPath(group.system, group, s, coeffs.reshape(s + 2, n, d))
        return OrbitRecord(
            group, path, nu,
            float(data.get("action", float("nan"))),
            float(data.get("grad_norm", float("nan"))),
            float(data.get("min_distance", float("nan"))),
        )


def write_orbit(record: OrbitRecord, path) -> None:
    with open(path, "w") as f:
        json.dump(record.to_dict(), f, indent=1)
        f.write("\n")


def read_orbit(path) -> OrbitRecord:
    with open(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise InvalidGenerator(f"{path}: invalid JSON: {exc}") from exc
    return OrbitRecord.from_dict(data)


def write_trajectory_csv(path: FourierPath, nu: int, out) -> None:
    """Full-period trajectory as CSV rows t, q1x, q1y, ..."""
    times, traj = extend_to_full_period(path, QuadratureParams(nu))
    n, d = path.system.n, path.system.d
    header = ["t"] + [
        f"q{j + 1}{'xyzw'[c] if c < 4 else c}" for j in range(n) for c in range(d)
    ]
    with open(out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for t, q in zip(times, traj):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in q.ravel()])


def write_history_csv(history, out) -> None:
    with open(out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["iter", "action", "grad_norm", "min_distance"])
        for row in history:
            w.writerow([row[0]] + [repr(float(v)) for v in row[1:]])
