"""Physical primitives: mass systems, mass metric, potential, forces.

Configurations and tangent vectors are plain numpy arrays of shape (n, d);
no wrapper classes. All functions here are pure.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CollisionError, ShapeError
from . import kernels

DEFAULT_EPS_COLL = 1e-9


@dataclass(frozen=True)
class MassSystem:
    """n bodies in d-dimensional space with homogeneity exponent alpha.

    Masses are normalized to total 1 on construction (the variational
    formulas assume it); the raw values are kept for display.
    """

    n: int
    d: int
    alpha: float
    masses: np.ndarray
    raw_masses: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 bodies, got n={self.n}")
        if self.d < 1:
            raise ValueError(f"need d >= 1, got d={self.d}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        raw = np.asarray(self.masses, dtype=float)
        if raw.shape != (self.n,):
            raise ShapeError(f"expected {self.n} masses, got shape {raw.shape}")
        if not np.all(raw > 0):
            raise ValueError("all masses must be strictly positive")
        norm = raw / raw.sum()
        norm.setflags(write=False)
        raw = raw.copy()
        raw.setflags(write=False)
        object.__setattr__(self, "masses", norm)
        object.__setattr__(self, "raw_masses", raw)
        assert abs(norm.sum() - 1.0) < 1e-12

    def check_shape(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.shape != (self.n, self.d):
            raise ShapeError(
                f"expected shape ({self.n}, {self.d}), got {q.shape}"
            )
        return q


def mass_inner(v, w, sys: MassSystem) -> float:
    """Mass metric <v, w>_M = sum_j m_j v_j . w_j."""
    v = sys.check_shape(v)
    w = sys.check_shape(w)
    return float(np.einsum("j,jc,jc->", sys.masses, v, w))


def mass_norm(v, sys: MassSystem) -> float:
    return np.sqrt(max(mass_inner(v, v, sys), 0.0))


def min_mutual_distance(q, sys: MassSystem) -> float:
    q = sys.check_shape(q)
    ii, jj = np.triu_indices(sys.n, k=1)
    return float(np.linalg.norm(q[ii] - q[jj], axis=1).min())


def potential(q, sys: MassSystem, eps_coll: float = DEFAULT_EPS_COLL) -> float:
    """U(q) = sum_{i<j} m_i m_j / |q_i - q_j|^alpha."""
    q = sys.check_shape(q)
    U, mind = kernels.potential_batch(q[None], sys.masses, sys.alpha)
    if mind[0] < eps_coll:
        raise CollisionError(mind[0])
    return float(U[0])


def grad_potential_mass(
    q, sys: MassSystem, eps_coll: float = DEFAULT_EPS_COLL
) -> np.ndarray:
    """Mass-metric gradient of U: block j is (1/m_j) dU/dq_j."""
    q = sys.check_shape(q)
    _, G, mind = kernels.potential_grad_batch(q[None], sys.masses, sys.alpha)
    if mind[0] < eps_coll:
        raise CollisionError(mind[0])
    return G[0]


def newton_residual(
    pos, acc, sys: MassSystem, eps_coll: float = DEFAULT_EPS_COLL
) -> float:
    """Mass-metric norm of acc - grad_M U(pos); zero on true solutions."""
    acc = sys.check_shape(acc)
    return mass_norm(acc - grad_potential_mass(pos, sys, eps_coll), sys)
