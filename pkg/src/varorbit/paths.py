"""Equivariant Fourier path space and the discrete action.

A path on the fundamental domain [0, 1] is

    q(t) = a0 + t (a_end - a0) + sum_{k=1..s} a_k sin(k pi t)

with s + 2 coefficient blocks, each an (n, d) configuration. The kinetic
term has the closed form

    int_0^1 |qdot|_M^2 dt = |a_end - a0|_M^2 + sum_k (k^2 pi^2 / 2) |a_k|_M^2

and the potential term is a composite trapezoidal sum over nu
subintervals. The total discrete action over one full period is
l * (kinetic/2 + potential).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import MassSystem, DEFAULT_EPS_COLL
from .errors import CollisionError, ShapeError, SymmetryViolation
from .groups import (
    SymmetryGroup,
    act_on_config,
    boundary_projector,
    kernel_projector,
    segment_elements,
)
from . import kernels


def default_nu(s: int) -> int:
    """Quadrature resolution that out-resolves the highest mode."""
    return max(64, 8 * s)


@dataclass(frozen=True)
class QuadratureParams:
    nu: int = 64

    def __post_init__(self):
        if self.nu < 1:
            raise ValueError(f"nu must be >= 1, got {self.nu}")


@dataclass(frozen=True)
class ActionReport:
    action: float
    kinetic: float        # int_0^1 |qdot|^2 dt (before the l/2 prefactor)
    potential: float      # trapezoidal value of int_0^1 U dt
    grad_norm: float
    min_mutual_distance: float
    multiplier: int       # l = |G/K|


@dataclass
class FourierPath:
    system: MassSystem
    group: SymmetryGroup
    s: int
    coeffs: np.ndarray  # (s + 2, n, d)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        expect = (self.s + 2, self.system.n, self.system.d)
        if c.shape != expect:
            raise ShapeError(f"coeffs shape {c.shape}, expected {expect}")
        self.coeffs = c

    def copy_with(self, coeffs) -> "FourierPath":
        return FourierPath(self.system, self.group, self.s, np.array(coeffs))

    @property
    def a0(self):
        return self.coeffs[0]

    @property
    def a_end(self):
        return self.coeffs[-1]


@lru_cache(maxsize=32)
def _trig_tables(s: int, nu: int):
    """Nodes t_j = j/nu and the sine table sin(k pi t_j), shape (s, nu+1)."""
    t = np.arange(nu + 1) / nu
    k = np.arange(1, s + 1)
    sin = np.sin(np.pi * np.outer(k, t))
    t.setflags(write=False)
    sin.setflags(write=False)
    return t, sin


def _trap_weights(nu: int) -> np.ndarray:
    w = np.ones(nu + 1)
    w[0] = w[-1] = 0.5
    return w / nu


def sample(path: FourierPath, t):
    """Evaluate the path at t in [0, 1] (scalar or array)."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < -1e-12) or np.any(t_arr > 1 + 1e-12):
        raise ValueError("t outside [0, 1]")
    q = sample_unchecked(path, t_arr)
    return q[0] if np.isscalar(t) or np.ndim(t) == 0 else q


def sample_unchecked(path: FourierPath, t_arr: np.ndarray) -> np.ndarray:
    a = path.coeffs
    s = path.s
    out = a[0][None] + t_arr[:, None, None] * (a[-1] - a[0])[None]
    if s:
        k = np.arange(1, s + 1)
        sin = np.sin(np.pi * np.outer(k, t_arr))  # (s, m)
        out += np.einsum("km,knd->mnd", sin, a[1:-1])
    return out


def sample_nodes(path: FourierPath, quad: QuadratureParams) -> np.ndarray:
    """Path values at the quadrature nodes j/nu (cached trig tables)."""
    t, sin = _trig_tables(path.s, quad.nu)
    a = path.coeffs
    out = a[0][None] + t[:, None, None] * (a[-1] - a[0])[None]
    if path.s:
        out += np.einsum("km,knd->mnd", sin, a[1:-1])
    return out


def velocity(path: FourierPath, t):
    """Analytic first derivative of the path."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    a = path.coeffs
    out = np.broadcast_to((a[-1] - a[0])[None], (len(t_arr),) + a[0].shape).copy()
    if path.s:
        k = np.arange(1, path.s + 1)
        cos = (k * np.pi)[:, None] * np.cos(np.pi * np.outer(k, t_arr))
        out += np.einsum("km,knd->mnd", cos, a[1:-1])
    return out[0] if np.ndim(t) == 0 else out


def acceleration(path: FourierPath, t):
    """Analytic second derivative of the path."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    a = path.coeffs
    out = np.zeros((len(t_arr),) + a[0].shape)
    if path.s:
        k = np.arange(1, path.s + 1)
        sin = -((k * np.pi) ** 2)[:, None] * np.sin(np.pi * np.outer(k, t_arr))
        out += np.einsum("km,knd->mnd", sin, a[1:-1])
    return out[0] if np.ndim(t) == 0 else out


def kinetic_quadratic(path: FourierPath) -> float:
    """Closed-form int_0^1 |qdot|_M^2 dt."""
    m = path.system.masses
    a = path.coeffs
    seg = a[-1] - a[0]
    val = float(np.einsum("j,jc,jc->", m, seg, seg))
    if path.s:
        k = np.arange(1, path.s + 1)
        norms = np.einsum("j,kjc,kjc->k", m, a[1:-1], a[1:-1])
        val += float(np.sum(0.5 * (k * np.pi) ** 2 * norms))
    return val


def _potential_terms(path: FourierPath, quad: QuadratureParams,
                     eps_coll: float = DEFAULT_EPS_COLL):
    samples = sample_nodes(path, quad)
    U, mind = kernels.potential_batch(samples, path.system.masses,
                                      path.system.alpha)
    bad = np.nonzero(mind < eps_coll)[0]
    if bad.size:
        raise CollisionError(float(mind[bad[0]]), int(bad[0]))
    w = _trap_weights(quad.nu)
    return float(np.dot(w, U)), float(mind.min())


def discrete_potential(path: FourierPath, quad: QuadratureParams,
                       eps_coll: float = DEFAULT_EPS_COLL) -> float:
    """Composite trapezoidal value of int_0^1 U(q(t)) dt."""
    return _potential_terms(path, quad, eps_coll)[0]


def discrete_action(path: FourierPath, quad: QuadratureParams,
                    eps_coll: float = DEFAULT_EPS_COLL,
                    grad_norm: float = float("nan")) -> ActionReport:
    """Full-period discrete action l * (kinetic/2 + potential)."""
    kin = kinetic_quadratic(path)
    pot, mind = _potential_terms(path, quad, eps_coll)
    l = path.group.l
    return ActionReport(
        action=l * (0.5 * kin + pot),
        kinetic=kin,
        potential=pot,
        grad_norm=grad_norm,
        min_mutual_distance=mind,
        multiplier=l,
    )


def action_gradient(path: FourierPath, quad: QuadratureParams,
                    eps_coll: float = DEFAULT_EPS_COLL) -> np.ndarray:
    """Mass-metric gradient of discrete_action w.r.t. all coefficient blocks.

    Block g satisfies dA[delta] = sum_blocks <g_block, delta_block>_M.
    Not symmetrized; the optimizer projects it onto the symmetric subspace.
    """
    a = path.coeffs
    s, nu = path.s, quad.nu
    t, sin = _trig_tables(s, nu)
    samples = sample_nodes(path, quad)
    U, G, mind = kernels.potential_grad_batch(samples, path.system.masses,
                                              path.system.alpha)
    bad = np.nonzero(mind < eps_coll)[0]
    if bad.size:
        raise CollisionError(float(mind[bad[0]]), int(bad[0]))
    w = _trap_weights(nu)

    grad = np.zeros_like(a)
    # potential part: chain rule through the node evaluations
    grad[0] = np.einsum("m,mnd->nd", w * (1.0 - t), G)
    grad[-1] = np.einsum("m,mnd->nd", w * t, G)
    if s:
        grad[1:-1] = np.einsum("km,m,mnd->knd", sin, w, G)
    # kinetic part of int |qdot|^2: gradient blocks in the mass metric
    seg = a[-1] - a[0]
    grad[0] += 0.5 * (-2.0 * seg)
    grad[-1] += 0.5 * (2.0 * seg)
    if s:
        k = np.arange(1, s + 1)
        grad[1:-1] += 0.5 * ((k * np.pi) ** 2)[:, None, None] * a[1:-1]
    return path.group.l * grad


# ---------------------------------------------------------------------------
# Symmetrization

def project_coeffs(group: SymmetryGroup, coeffs: np.ndarray) -> np.ndarray:
    """Apply the symmetric-subspace projector to a coefficient block array.

    Blockwise kernel averaging followed by boundary-pair averaging. The
    projector is orthogonal in the mass metric, so it is equally valid on
    paths and on gradients.
    """
    n, d = group.system.n, group.system.d
    nd = n * d
    flat = coeffs.reshape(coeffs.shape[0], nd)
    PK = kernel_projector(group)
    out = flat @ PK.T
    PB = boundary_projector(group)
    ends = np.concatenate([out[0], out[-1]]) @ PB.T
    out[0] = ends[:nd]
    out[-1] = ends[nd:]
    return out.reshape(coeffs.shape)


def symmetrize(path: FourierPath) -> FourierPath:
    return path.copy_with(project_coeffs(path.group, path.coeffs))


def symmetry_violation(path: FourierPath) -> float:
    """Max-norm distance of the coefficients from the symmetric subspace."""
    return float(np.max(np.abs(
        project_coeffs(path.group, path.coeffs) - path.coeffs
    ))) if path.coeffs.size else 0.0


# ---------------------------------------------------------------------------
# Full-period reconstruction

def extend_to_full_period(path: FourierPath, quad: QuadratureParams,
                          tol: float = 1e-10):
    """Sample one full period [0, l] by symmetry from the fundamental domain.

    Returns (times, configs) with nu*l + 1 entries; raises
    SymmetryViolation if adjacent segments disagree at their junctions or
    the trajectory fails to close up.
    """
    nu = quad.nu
    l = path.group.l
    fund = sample_nodes(path, quad)  # (nu+1, n, d)
    times = np.arange(nu * l + 1) / nu
    out = np.empty((nu * l + 1,) + fund.shape[1:])
    prev_end = None
    for j, (g, rev) in enumerate(segment_elements(path.group)):
        block = fund[::-1] if rev else fund
        seg = np.einsum("mnd,ed->mne", block[:, list(g._inv_perm)], g.mat)
        if prev_end is not None:
            gap = float(np.max(np.abs(seg[0] - prev_end)))
            if gap > tol:
                raise SymmetryViolation(
                    f"junction mismatch {gap:.3e} entering segment {j}"
                )
        out[j * nu : (j + 1) * nu + 1] = seg
        prev_end = seg[-1]
    gap = float(np.max(np.abs(out[-1] - out[0])))
    if gap > tol:
        raise SymmetryViolation(f"trajectory fails to close up by {gap:.3e}")
    return times, out


def sample_full_period(path: FourierPath, points_per_segment: int,
                       tol: float = 1e-10):
    """Like extend_to_full_period but at an arbitrary per-segment resolution."""
    return extend_to_full_period(
        path, QuadratureParams(points_per_segment), tol=tol
    )
