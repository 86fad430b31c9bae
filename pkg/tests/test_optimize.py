import numpy as np
import pytest

from varorbit.core import MassSystem, grad_potential_mass, mass_norm
from varorbit.errors import InitFailure, TruncationError
from varorbit.groups import trivial_group
from varorbit.optimize import (
    MinimizeConfig,
    Minimizer,
    continue_with,
    minimize,
    random_init,
    residual_grid_max,
    verify,
)
from varorbit.paths import (
    FourierPath,
    QuadratureParams,
    acceleration,
    discrete_action,
    sample_unchecked,
    symmetry_violation,
)
from conftest import load_group

# circular two-body orbit: one-variable model a(R) = pi^2 R^2 + 1/(4R),
# minimized in closed form at R^3 = 1/(8 pi^2)
KEPLER_ACTION = 3 * np.pi ** 2 * (8 * np.pi ** 2) ** (-2.0 / 3.0)


def run_kepler(seed=0, s=8, nu=128, max_iters=4000, **kw):
    group = load_group("two_body_choreography")
    path = random_init(group, s, seed=seed, amplitude=0.5)
    cfg = MinimizeConfig(max_iters=max_iters, seed=seed, **kw)
    return minimize(path, QuadratureParams(nu), cfg)


# ------------------------------------------------------------- initialization

def test_random_init_deterministic_and_symmetric():
    group = load_group("figure_eight")
    p1 = random_init(group, 6, seed=3)
    p2 = random_init(group, 6, seed=3)
    np.testing.assert_array_equal(p1.coeffs, p2.coeffs)
    assert symmetry_violation(p1) < 1e-12
    p3 = random_init(group, 6, seed=4)
    assert np.max(np.abs(p3.coeffs - p1.coeffs)) > 1e-3


def test_random_init_zero_amplitude_fails():
    group = load_group("figure_eight")
    with pytest.raises(InitFailure):
        random_init(group, 6, seed=0, amplitude=0.0)


# --------------------------------------------------------------- minimization

def test_kepler_converges_to_circular_orbit():
    out = run_kepler()
    assert out.status == "converged"
    assert out.report.grad_norm < 1e-8
    assert abs(out.report.action - KEPLER_ACTION) / KEPLER_ACTION < 1e-3
    assert out.report.min_mutual_distance > 0.3


def test_minimize_is_deterministic():
    o1 = run_kepler(seed=5)
    o2 = run_kepler(seed=5)
    np.testing.assert_array_equal(o1.path.coeffs, o2.path.coeffs)
    assert o1.report.action == o2.report.action
    assert o1.iterations == o2.iterations


def test_restart_from_solution_is_stationary():
    out = run_kepler()
    again = minimize(out.path, out.quad, MinimizeConfig(max_iters=50))
    assert again.status == "converged"
    assert again.iterations <= 2
    assert abs(again.report.action - out.report.action) < 1e-12


def test_history_monotone_descent():
    out = run_kepler(seed=2)
    actions = [h[1] for h in out.history]
    assert all(b <= a + 1e-12 for a, b in zip(actions, actions[1:]))
    assert actions[-1] < actions[0]


def test_iterates_stay_symmetric():
    out = run_kepler(seed=1)
    assert symmetry_violation(out.path) < 1e-10


def test_chunked_advance_matches_monolithic():
    group = load_group("figure_eight")
    cfg = MinimizeConfig(max_iters=10_000)
    quad = QuadratureParams(96)
    path = random_init(group, 8, seed=0, amplitude=1.0)

    mono = Minimizer(path, quad, cfg)
    mono.advance(300)
    chunked = Minimizer(path, quad, cfg)
    total = 0
    while total < 300:
        taken = chunked.advance(25)
        total += taken
        if taken == 0:
            break
    np.testing.assert_array_equal(mono.x, chunked.x)
    assert mono.iterations == chunked.iterations
    assert mono.rep.action == chunked.rep.action


def test_trivial_group_finds_closed_loop():
    # l = 1 still forces closed loops, so stationary loops exist even
    # without coercivity; translations are flat directions the gradient
    # never sees
    sysm = MassSystem(n=2, d=2, alpha=1.0, masses=np.ones(2))
    group = trivial_group(sysm)
    path = random_init(group, 4, seed=0, amplitude=1.0)
    out = minimize(path, QuadratureParams(64), MinimizeConfig(max_iters=300))
    assert out.status == "converged"
    assert out.report.min_mutual_distance > 0.01


def test_iteration_cap_status():
    out = run_kepler(max_iters=3)
    assert out.status == "iteration-cap"
    assert out.iterations == 3


def test_steepest_descent_also_descends():
    group = load_group("two_body_choreography")
    path = random_init(group, 6, seed=0, amplitude=0.5)
    quad = QuadratureParams(96)
    a0 = discrete_action(path, quad).action
    out = minimize(path, quad, MinimizeConfig(max_iters=200,
                                              method="steepest"))
    assert out.report.action < a0
    actions = [h[1] for h in out.history]
    assert all(b <= a + 1e-12 for a, b in zip(actions, actions[1:]))


def test_collision_start_stalls():
    sysm = MassSystem(n=2, d=2, alpha=1.0, masses=np.ones(2))
    group = trivial_group(sysm)
    path = FourierPath(sysm, group, 0, np.zeros((2, 2, 2)))
    m = Minimizer(path, QuadratureParams(16), MinimizeConfig())
    assert m.status == "collision-stalled"
    assert m.advance(10) == 0


# ------------------------------------------------------------ Newton residual

def test_interior_residual_decreases_with_s():
    # the pointwise defect away from the endpoints shrinks as modes are
    # added; the endpoint defect itself is structural (sine acceleration
    # vanishes at t = 0, 1) and does not
    group = load_group("two_body_choreography")
    interior = {}
    endpoint = {}
    for s in (8, 32):
        path = random_init(group, s, seed=1, amplitude=0.5)
        out = minimize(path, QuadratureParams(256),
                       MinimizeConfig(max_iters=4000))
        assert out.status == "converged"
        ts = np.linspace(0.25, 0.75, 101)
        qs = sample_unchecked(out.path, ts)
        accs = acceleration(out.path, ts)
        interior[s] = max(
            mass_norm(a - grad_potential_mass(q, group.system), group.system)
            for q, a in zip(qs, accs))
        endpoint[s], _ = residual_grid_max(out.path, out.quad)
    assert interior[32] < interior[8] / 2
    assert endpoint[32] > 1.0  # structural, s-independent


# ----------------------------------------------------------------- verify

def test_verify_accepts_converged_orbit():
    out = run_kepler()
    rep = verify(out.path, out.quad, residual_rel_tol=1.5)
    assert rep.symmetry_ok
    assert rep.distance_ok
    assert rep.residual_ok
    assert rep.passed


def test_verify_rejects_non_stationary_path():
    group = load_group("two_body_choreography")
    path = random_init(group, 6, seed=7, amplitude=0.5)
    rep = verify(path, QuadratureParams(64), residual_rel_tol=1e-2)
    assert not rep.residual_ok
    assert not rep.passed


# ------------------------------------------------------------- continuation

def test_continue_zero_pad_preserves_action():
    out = run_kepler()
    new_path, new_quad = continue_with(out.path, s=16, nu=out.quad.nu)
    a0 = discrete_action(out.path, out.quad).action
    a1 = discrete_action(new_path, new_quad).action
    assert abs(a0 - a1) < 1e-12
    np.testing.assert_array_equal(new_path.coeffs[1:9], out.path.coeffs[1:-1])
    np.testing.assert_allclose(new_path.coeffs[9:-1], 0.0, atol=1e-15)


def test_continue_truncation_guard():
    out = run_kepler()
    with pytest.raises(TruncationError):
        continue_with(out.path, s=4)
    new_path, _ = continue_with(out.path, s=4, truncate=True)
    assert new_path.s == 4


def test_continue_perturb():
    out = run_kepler()
    same, _ = continue_with(out.path, perturb_amplitude=0.0)
    np.testing.assert_allclose(same.coeffs, out.path.coeffs, atol=1e-14)
    bumped, _ = continue_with(out.path, perturb_amplitude=0.05, seed=9)
    assert np.max(np.abs(bumped.coeffs - out.path.coeffs)) > 1e-4
    assert symmetry_violation(bumped) < 1e-12
    b2, _ = continue_with(out.path, perturb_amplitude=0.05, seed=9)
    np.testing.assert_array_equal(bumped.coeffs, b2.coeffs)
