"""Local minimization of the discrete action over the symmetric subspace.

Limited-memory quasi-Newton (two-loop recursion, memory 10) with Armijo
backtracking; all inner products are taken in the mass metric so that the
symmetrization projector is orthogonal and "project the gradient" equals
"gradient of the restricted functional". Collisions during a trial step
count as infinite action and simply shrink the step.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .core import MassSystem, DEFAULT_EPS_COLL, grad_potential_mass, mass_norm
from .errors import CollisionError, InitFailure, TruncationError
from .groups import SymmetryGroup
from .paths import (
    ActionReport,
    FourierPath,
    QuadratureParams,
    acceleration,
    action_gradient,
    default_nu,
    discrete_action,
    extend_to_full_period,
    project_coeffs,
    sample_nodes,
    sample_unchecked,
    symmetrize,
    symmetry_violation,
)

DIVERGENCE_NORM = 1e6


@dataclass(frozen=True)
class MinimizeConfig:
    max_iters: int = 2000
    grad_tol: float = 1e-8
    step0: float = 1.0
    shrink: float = 0.5
    armijo: float = 1e-4
    method: str = "lbfgs"  # "lbfgs" | "steepest"
    memory: int = 10
    eps_coll: float = DEFAULT_EPS_COLL
    seed: int = 0
    amplitude: float = 1.0

    def __post_init__(self):
        if not (0 < self.shrink < 1):
            raise ValueError("shrink factor must lie in (0, 1)")
        if self.grad_tol <= 0 or self.step0 <= 0 or self.armijo <= 0:
            raise ValueError("tolerances and steps must be positive")
        if self.method not in ("lbfgs", "steepest"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class MinimizeOutcome:
    status: str  # converged | collision-stalled | iteration-cap | diverged
    path: FourierPath
    quad: QuadratureParams
    report: ActionReport
    history: list = field(default_factory=list)  # (iter, action, grad_norm, min_dist)
    newton_residual_max: float = float("nan")
    iterations: int = 0


def _dot(masses, x, y) -> float:
    return float(np.einsum("j,bjc,bjc->", masses, x, y))


def random_init(group: SymmetryGroup, s: int, seed: int = 0,
                amplitude: float = 1.0, nu: int | None = None,
                eps_coll: float = DEFAULT_EPS_COLL) -> FourierPath:
    """Symmetrized random path, redrawn until comfortably collision-free."""
    system = group.system
    quad = QuadratureParams(nu if nu is not None else default_nu(s))
    rng = np.random.default_rng(seed)
    for _ in range(100):
        raw = rng.uniform(-amplitude, amplitude, (s + 2, system.n, system.d))
        path = symmetrize(FourierPath(system, group, s, raw))
        samples = sample_nodes(path, quad)
        ii, jj = np.triu_indices(system.n, k=1)
        mind = float(np.linalg.norm(
            samples[:, ii] - samples[:, jj], axis=2).min())
        if mind >= 10 * eps_coll:
            return path
    raise InitFailure(
        "100 random draws all collided; the symmetric subspace may force "
        "near-collisions"
    )


def _lbfgs_direction(g, mem, masses):
    if not mem:
        return -g
    q = g.copy()
    alphas = []
    for s_k, y_k, rho_k in reversed(mem):
        a_k = rho_k * _dot(masses, s_k, q)
        q -= a_k * y_k
        alphas.append(a_k)
    s_k, y_k, rho_k = mem[-1]
    gamma = _dot(masses, s_k, y_k) / max(_dot(masses, y_k, y_k), 1e-300)
    q *= gamma
    for (s_k, y_k, rho_k), a_k in zip(mem, reversed(alphas)):
        b_k = rho_k * _dot(masses, y_k, q)
        q += (a_k - b_k) * s_k
    return -q


def residual_grid_max(path: FourierPath, quad: QuadratureParams,
                      eps_coll: float = DEFAULT_EPS_COLL):
    """Max Newton residual (and gradient scale) over a 4*nu grid on [0, 1].

    By equivariance the residual at symmetric images of a time equals the
    residual at that time, so the fundamental-domain grid covers the full
    period.
    """
    system = path.system
    ts = np.arange(4 * quad.nu + 1) / (4 * quad.nu)
    qs = sample_unchecked(path, ts)
    accs = acceleration(path, ts)
    res_max = 0.0
    grad_scale = 0.0
    for q, acc in zip(qs, accs):
        g = grad_potential_mass(q, system, eps_coll)
        res_max = max(res_max, mass_norm(acc - g, system))
        grad_scale = max(grad_scale, mass_norm(g, system))
    return res_max, grad_scale


class Minimizer:
    """Resumable descent session over the symmetric coefficient space.

    ``advance(k)`` runs up to k iterations and may be called repeatedly;
    running the same totals in any chunking produces bit-identical
    iterates (the quasi-Newton memory lives here, not per call).
    """

    def __init__(self, path: FourierPath, quad: QuadratureParams,
                 cfg: MinimizeConfig):
        self.system = path.system
        self.group = path.group
        self.s = path.s
        self.quad = quad
        self.cfg = cfg
        self.masses = self.system.masses
        self.history: list = []
        self.status: str | None = None  # None while still running
        self.iterations = 0
        self.mem: deque = deque(maxlen=cfg.memory)
        self.x = project_coeffs(self.group, path.coeffs)
        self.rep = self._evaluate(self.x)
        if self.rep is None:
            self.status = "collision-stalled"
            self.rep = ActionReport(np.inf, np.inf, np.inf, np.inf, 0.0,
                                    self.group.l)
            self.g = np.zeros_like(self.x)
        else:
            self.g = self._gradient(self.x)

    def _make_path(self, c) -> FourierPath:
        return FourierPath(self.system, self.group, self.s, c)

    def _evaluate(self, c):
        try:
            return discrete_action(self._make_path(c), self.quad,
                                   self.cfg.eps_coll)
        except CollisionError:
            return None

    def _gradient(self, c):
        return project_coeffs(
            self.group,
            action_gradient(self._make_path(c), self.quad, self.cfg.eps_coll))

    @property
    def grad_norm(self) -> float:
        return float(np.sqrt(max(_dot(self.masses, self.g, self.g), 0.0)))

    @property
    def path(self) -> FourierPath:
        return self._make_path(self.x)

    def advance(self, max_steps: int) -> int:
        """Run up to max_steps descent iterations; returns the number taken."""
        cfg = self.cfg
        taken = 0
        while taken < max_steps and self.status is None:
            gnorm = self.grad_norm
            self.history.append((self.iterations, self.rep.action, gnorm,
                                 self.rep.min_mutual_distance))
            if gnorm < cfg.grad_tol:
                self.status = "converged"
                break
            if np.sqrt(_dot(self.masses, self.x, self.x)) > DIVERGENCE_NORM:
                self.status = "diverged"
                break
            d = (_lbfgs_direction(self.g, self.mem, self.masses)
                 if cfg.method == "lbfgs" else -self.g)
            slope = _dot(self.masses, self.g, d)
            if slope > -1e-14 * gnorm * np.sqrt(
                    max(_dot(self.masses, d, d), 1e-300)):
                d = -self.g
                slope = -gnorm * gnorm
                self.mem.clear()
            t = cfg.step0
            accepted = False
            collision_seen = False
            rep_n = None
            while t >= 1e-14:
                xn = self.x + t * d
                rep_n = self._evaluate(xn)
                if rep_n is None:
                    collision_seen = True
                elif rep_n.action <= self.rep.action + cfg.armijo * t * slope:
                    accepted = True
                    break
                t *= cfg.shrink
            if not accepted:
                self.status = ("collision-stalled" if collision_seen
                               else "iteration-cap")
                break
            gn = self._gradient(xn)
            s_k = xn - self.x
            y_k = gn - self.g
            curv = _dot(self.masses, s_k, y_k)
            if curv > 1e-12 * np.sqrt(
                    _dot(self.masses, s_k, s_k)
                    * max(_dot(self.masses, y_k, y_k), 1e-300)):
                self.mem.append((s_k, y_k, 1.0 / curv))
            self.x, self.g, self.rep = xn, gn, rep_n
            self.iterations += 1
            taken += 1
        return taken

    def outcome(self, status: str | None = None) -> MinimizeOutcome:
        status = status or self.status or "iteration-cap"
        final_path = self.path
        final_rep = replace(self.rep, grad_norm=self.grad_norm)
        out = MinimizeOutcome(status, final_path, self.quad, final_rep,
                              list(self.history), iterations=self.iterations)
        if status == "converged":
            try:
                out.newton_residual_max, _ = residual_grid_max(
                    final_path, self.quad, self.cfg.eps_coll)
            except CollisionError:
                out.newton_residual_max = np.inf
        return out


def minimize(path: FourierPath, quad: QuadratureParams,
             cfg: MinimizeConfig) -> MinimizeOutcome:
    m = Minimizer(path, quad, cfg)
    m.advance(cfg.max_iters)
    if m.status is None:
        # cap reached while still descending: record the final iterate
        m.history.append((m.iterations, m.rep.action, m.grad_norm,
                          m.rep.min_mutual_distance))
    return m.outcome()


@dataclass(frozen=True)
class VerificationReport:
    residual_max: float
    residual_scale: float  # max |grad_M U|_M over the grid
    symmetry_max: float
    min_distance: float
    residual_ok: bool
    symmetry_ok: bool
    distance_ok: bool

    @property
    def passed(self) -> bool:
        return self.residual_ok and self.symmetry_ok and self.distance_ok


def verify(path: FourierPath, quad: QuadratureParams,
           eps_coll: float = DEFAULT_EPS_COLL,
           residual_rel_tol: float = 1e-2,
           symmetry_tol: float = 1e-8) -> VerificationReport:
    """Newton-residual, symmetry, and distance checks for a candidate orbit."""
    res_max, scale = residual_grid_max(path, quad, eps_coll)
    sym = symmetry_violation(path)
    _, traj = extend_to_full_period(path, quad, tol=max(symmetry_tol, 1e-10))
    n = path.system.n
    ii, jj = np.triu_indices(n, k=1)
    mind = float(np.linalg.norm(traj[:, ii] - traj[:, jj], axis=2).min())
    return VerificationReport(
        residual_max=res_max,
        residual_scale=scale,
        symmetry_max=sym,
        min_distance=mind,
        residual_ok=res_max < residual_rel_tol * max(scale, 1e-300),
        symmetry_ok=sym < symmetry_tol,
        distance_ok=mind > 10 * eps_coll,
    )


def continue_with(path: FourierPath, s: int | None = None,
                  nu: int | None = None,
                  perturb_amplitude: float = 0.0, seed: int = 0,
                  truncate: bool = False,
                  eps_coll: float = DEFAULT_EPS_COLL):
    """Reshape and/or perturb a path for another minimization round.

    New modes are zero-padded; dropping occupied modes requires
    ``truncate=True``. Perturbation noise is symmetrized. Returns
    (path, quad).
    """
    system, group = path.system, path.group
    new_s = path.s if s is None else s
    if new_s < path.s:
        tail = path.coeffs[new_s + 1 : -1]
        if not truncate and tail.size and float(np.max(np.abs(tail))) > 0:
            raise TruncationError(
                f"shrinking s from {path.s} to {new_s} would drop occupied "
                "modes; pass truncate=True"
            )
    coeffs = np.zeros((new_s + 2, system.n, system.d))
    keep = min(new_s, path.s)
    coeffs[0] = path.coeffs[0]
    coeffs[-1] = path.coeffs[-1]
    coeffs[1 : keep + 1] = path.coeffs[1 : keep + 1]
    if perturb_amplitude:
        rng = np.random.default_rng(seed)
        coeffs = coeffs + rng.uniform(
            -perturb_amplitude, perturb_amplitude, coeffs.shape)
    new_path = symmetrize(FourierPath(system, group, new_s, coeffs))
    quad = QuadratureParams(nu if nu is not None else default_nu(new_s))
    return new_path, quad
