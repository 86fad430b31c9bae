from fractions import Fraction

import numpy as np
import pytest

from varorbit.core import MassSystem, mass_inner, potential
from varorbit.errors import CollisionError
from varorbit.groups import (
    GroupElement,
    TimeAction,
    act_on_config,
    group_from_generators,
    trivial_group,
)
from varorbit.paths import (
    FourierPath,
    QuadratureParams,
    _trap_weights,
    acceleration,
    action_gradient,
    default_nu,
    discrete_action,
    discrete_potential,
    extend_to_full_period,
    kinetic_quadratic,
    project_coeffs,
    sample,
    sample_nodes,
    symmetrize,
    symmetry_violation,
    velocity,
)
from conftest import load_group, separated_random_path


def eq_system(n, d=2, alpha=1.0):
    return MassSystem(n=n, d=d, alpha=alpha, masses=np.ones(n))


def direct_sample(path, t):
    """Independent term-by-term re-summation in extended precision."""
    a = path.coeffs.astype(np.longdouble)
    t = np.longdouble(t)
    out = a[0] + t * (a[-1] - a[0])
    for k in range(1, path.s + 1):
        out = out + a[k] * np.sin(np.longdouble(np.pi) * k * t)
    return np.asarray(out, dtype=float)


# ------------------------------------------------------------------- sampling

def test_default_nu():
    assert default_nu(1) == 64
    assert default_nu(12) == 96
    assert default_nu(100) == 800


def test_sample_boundary_values():
    group = trivial_group(eq_system(2))
    rng = np.random.default_rng(0)
    coeffs = rng.normal(size=(5, 2, 2))
    path = FourierPath(group.system, group, 3, coeffs)
    np.testing.assert_allclose(sample(path, 0.0), coeffs[0], atol=1e-14)
    np.testing.assert_allclose(sample(path, 1.0), coeffs[-1], atol=1e-13)


def test_sample_single_mode_midpoint():
    group = trivial_group(eq_system(2))
    coeffs = np.zeros((3, 2, 2))
    coeffs[0] = [[0.0, 0.0], [1.0, 0.0]]
    coeffs[-1] = [[0.0, 2.0], [1.0, 2.0]]
    coeffs[1] = [[0.5, 0.0], [0.0, -0.5]]
    path = FourierPath(group.system, group, 1, coeffs)
    mid = 0.5 * (coeffs[0] + coeffs[-1]) + coeffs[1]  # sin(pi/2) = 1
    np.testing.assert_allclose(sample(path, 0.5), mid, atol=1e-14)


def test_sample_matches_direct_resummation():
    rng = np.random.default_rng(1)
    group = trivial_group(eq_system(3, d=3))
    coeffs = rng.normal(size=(14, 3, 3))
    path = FourierPath(group.system, group, 12, coeffs)
    for t in rng.uniform(0, 1, 20):
        np.testing.assert_allclose(sample(path, t), direct_sample(path, t),
                                   atol=1e-14)


def test_sample_nodes_matches_sample():
    rng = np.random.default_rng(2)
    group = trivial_group(eq_system(2))
    path = FourierPath(group.system, group, 4, rng.normal(size=(6, 2, 2)))
    quad = QuadratureParams(17)
    nodes = sample_nodes(path, quad)
    t = np.arange(18) / 17
    np.testing.assert_allclose(nodes, sample(path, t), atol=1e-14)


def test_sample_rejects_out_of_range():
    group = trivial_group(eq_system(2))
    path = FourierPath(group.system, group, 0, np.zeros((2, 2, 2)) + 1.0)
    with pytest.raises(ValueError):
        sample(path, 1.5)


# ---------------------------------------------------------------- derivatives

def test_velocity_straight_segment():
    group = trivial_group(eq_system(2))
    coeffs = np.zeros((2, 2, 2))
    coeffs[-1] = [[1.0, 2.0], [3.0, -1.0]]
    path = FourierPath(group.system, group, 0, coeffs)
    for t in (0.0, 0.3, 1.0):
        np.testing.assert_allclose(velocity(path, t), coeffs[-1], atol=1e-14)
        np.testing.assert_allclose(acceleration(path, t), 0.0, atol=1e-14)


def test_derivatives_match_finite_differences():
    rng = np.random.default_rng(3)
    group = trivial_group(eq_system(3))
    path = FourierPath(group.system, group, 6, rng.normal(size=(8, 3, 2)))
    for t in (0.2, 0.5, 0.77):
        h = 1e-6
        v_fd = (sample(path, t + h) - sample(path, t - h)) / (2 * h)
        np.testing.assert_allclose(velocity(path, t), v_fd, atol=1e-7)
        h = 1e-4
        a_fd = (sample(path, t + h) - 2 * sample(path, t)
                + sample(path, t - h)) / h ** 2
        np.testing.assert_allclose(acceleration(path, t), a_fd, atol=1e-3)


def test_acceleration_vanishes_at_endpoints():
    # sine-series second derivative is identically zero at t = 0 and 1
    rng = np.random.default_rng(4)
    group = trivial_group(eq_system(2))
    path = FourierPath(group.system, group, 9, rng.normal(size=(11, 2, 2)))
    np.testing.assert_allclose(acceleration(path, 0.0), 0.0, atol=1e-10)
    np.testing.assert_allclose(acceleration(path, 1.0), 0.0, atol=1e-10)


# -------------------------------------------------------------------- kinetic

def test_kinetic_single_mode():
    group = trivial_group(eq_system(2))
    for k in (1, 2, 5):
        coeffs = np.zeros((7, 2, 2))
        coeffs[k] = [[1.0, 0.0], [0.0, 0.0]]  # unit coeff on body 1 (mass 1/2)
        path = FourierPath(group.system, group, 5, coeffs)
        want = (k * np.pi) ** 2 / 2 * 0.5
        assert abs(kinetic_quadratic(path) - want) < 1e-12


def test_kinetic_straight_segment():
    group = trivial_group(eq_system(2))
    coeffs = np.zeros((2, 2, 2))
    coeffs[-1] = [[2.0, 0.0], [0.0, 0.0]]
    path = FourierPath(group.system, group, 0, coeffs)
    assert abs(kinetic_quadratic(path) - 0.5 * 4.0) < 1e-14


def test_kinetic_matches_dense_quadrature():
    rng = np.random.default_rng(5)
    for _ in range(10):
        n, d, s = int(rng.integers(2, 5)), int(rng.integers(1, 4)), int(rng.integers(0, 17))
        sysm = MassSystem(n=n, d=d, alpha=1.0, masses=rng.uniform(0.5, 2, n))
        group = trivial_group(sysm)
        path = FourierPath(sysm, group, s, rng.normal(size=(s + 2, n, d)))
        t = np.arange(100_001) / 100_000
        v = velocity(path, t)
        sq = np.einsum("j,mjc,mjc->m", sysm.masses, v, v)
        w = np.full(100_001, 1e-5); w[0] = w[-1] = 5e-6
        assert np.isclose(kinetic_quadratic(path), float(w @ sq), rtol=1e-8)


# ------------------------------------------------------------------ potential

def test_trap_weights():
    for nu in (1, 7, 64):
        w = _trap_weights(nu)
        assert abs(w.sum() - 1.0) < 1e-15
        # exact for affine integrands
        t = np.arange(nu + 1) / nu
        assert abs(float(w @ (3.0 - 2.0 * t)) - 2.0) < 1e-14
        assert w[0] == w[-1] == 0.5 / nu


def test_discrete_potential_constant_path():
    group = trivial_group(eq_system(2))
    coeffs = np.zeros((2, 2, 2))
    coeffs[0] = coeffs[-1] = [[0.0, 0.0], [1.0, 0.0]]
    path = FourierPath(group.system, group, 0, coeffs)
    for nu in (1, 7, 64):
        assert abs(discrete_potential(path, QuadratureParams(nu)) - 0.25) < 1e-15


def test_discrete_potential_collision_index():
    # bodies cross at t = 1/2: node nu/2 for even nu
    group = trivial_group(eq_system(2))
    coeffs = np.zeros((2, 2, 2))
    coeffs[0] = [[-1.0, 0.0], [1.0, 0.0]]
    coeffs[-1] = [[1.0, 0.0], [-1.0, 0.0]]
    path = FourierPath(group.system, group, 0, coeffs)
    with pytest.raises(CollisionError) as exc:
        discrete_potential(path, QuadratureParams(64))
    assert exc.value.sample_index == 32


def test_potential_richardson_ratio():
    rng = np.random.default_rng(6)
    group = load_group("figure_eight")
    path = separated_random_path(rng, group, s=6)
    vals = {nu: discrete_potential(path, QuadratureParams(nu))
            for nu in (64, 128, 256)}
    ratio = (vals[64] - vals[128]) / (vals[128] - vals[256])
    assert 3.5 < ratio < 4.5


# --------------------------------------------------------------------- action

def test_action_trivial_constant():
    group = trivial_group(eq_system(2))
    coeffs = np.zeros((2, 2, 2))
    coeffs[0] = coeffs[-1] = [[0.0, 0.0], [2.0, 0.0]]
    path = FourierPath(group.system, group, 0, coeffs)
    rep = discrete_action(path, QuadratureParams(16))
    assert abs(rep.action - 0.125) < 1e-14
    assert rep.multiplier == 1


def test_action_multiplier_l3():
    # time-only cyclic group of order 3: action = 3 * fundamental-domain value
    sysm = eq_system(2)
    g = GroupElement(TimeAction.rotation(Fraction(1, 3)), [0, 1], np.eye(2))
    group = group_from_generators(sysm, [g])
    assert group.l == 3
    coeffs = np.zeros((2, 2, 2))
    coeffs[0] = coeffs[-1] = [[0.0, 0.0], [1.0, 0.0]]
    path = FourierPath(sysm, group, 0, coeffs)
    rep = discrete_action(path, QuadratureParams(8))
    assert abs(rep.action - 3 * 0.25) < 1e-14


def test_potential_invariant_under_group_action():
    rng = np.random.default_rng(7)
    group = load_group("figure_eight")
    path = separated_random_path(rng, group, s=4)
    q = sample(path, 0.37)
    for g in group.elements:
        assert np.isclose(potential(act_on_config(g, q), group.system),
                          potential(q, group.system), rtol=1e-12)


# ------------------------------------------------------------------- gradient

def numeric_directional(path, quad, delta, h=1e-6):
    up = path.copy_with(path.coeffs + h * delta)
    dn = path.copy_with(path.coeffs - h * delta)
    au = discrete_action(up, quad).action
    ad = discrete_action(dn, quad).action
    return (au - ad) / (2 * h)


def coeff_inner(system, x, y):
    return float(np.einsum("j,bjc,bjc->", system.masses, x, y))


@pytest.mark.parametrize("name", ["trivial", "two_body_choreography",
                                  "figure_eight", "brake_reflection"])
def test_action_gradient_matches_fd(name):
    rng = np.random.default_rng(8)
    group = load_group(name)
    quad = QuadratureParams(48)
    for _ in range(5):
        path = separated_random_path(rng, group, s=5)
        g = action_gradient(path, quad)
        delta = rng.normal(size=path.coeffs.shape)
        want = numeric_directional(path, quad, delta)
        got = coeff_inner(group.system, g, delta)
        assert np.isclose(got, want, rtol=1e-5, atol=1e-9)


def test_projector_idempotent_and_mass_orthogonal():
    rng = np.random.default_rng(9)
    for name in ("figure_eight", "brake_reflection", "two_body_choreography"):
        group = load_group(name)
        shape = (7, group.system.n, group.system.d)
        x, y = rng.normal(size=shape), rng.normal(size=shape)
        Px = project_coeffs(group, x)
        np.testing.assert_allclose(project_coeffs(group, Px), Px, atol=1e-12)
        # self-adjoint in the blockwise mass metric
        assert np.isclose(coeff_inner(group.system, Px, y),
                          coeff_inner(group.system, x, project_coeffs(group, y)),
                          rtol=1e-10, atol=1e-12)


def test_symmetrize_fixes_boundary_identities():
    rng = np.random.default_rng(10)
    group = load_group("figure_eight")
    path = symmetrize(FourierPath(group.system, group, 5,
                                  rng.normal(size=(7, 3, 2))))
    assert symmetry_violation(path) < 1e-12
    from varorbit.groups import spatial_matrix
    n, d = 3, 2
    H0 = spatial_matrix(group.h0, n, d)
    H1 = spatial_matrix(group.h1, n, d)
    np.testing.assert_allclose(H0 @ path.coeffs[0].ravel(),
                               path.coeffs[0].ravel(), atol=1e-12)
    np.testing.assert_allclose(H1 @ path.coeffs[-1].ravel(),
                               path.coeffs[-1].ravel(), atol=1e-12)


def test_symmetrize_trivial_group_closes_loop():
    # l = 1: the only constraint is a closed loop, a_end = a0
    rng = np.random.default_rng(11)
    group = load_group("trivial")
    coeffs = rng.normal(size=(6, 2, 2))
    path = symmetrize(FourierPath(group.system, group, 4, coeffs))
    np.testing.assert_allclose(path.coeffs[0], path.coeffs[-1], atol=1e-14)
    np.testing.assert_allclose(path.coeffs[0],
                               0.5 * (coeffs[0] + coeffs[-1]), atol=1e-14)
    np.testing.assert_allclose(path.coeffs[1:-1], coeffs[1:-1], atol=1e-14)


def test_symmetry_violation_positive_for_random():
    rng = np.random.default_rng(12)
    group = load_group("figure_eight")
    path = FourierPath(group.system, group, 4, rng.normal(size=(6, 3, 2)))
    assert symmetry_violation(path) > 1e-3


# --------------------------------------------------------------- full period

def test_full_period_trivial_group():
    rng = np.random.default_rng(13)
    group = load_group("trivial")
    path = FourierPath(group.system, group, 3, rng.normal(size=(5, 2, 2)))
    path.coeffs[-1] = path.coeffs[0]  # close the loop for l = 1
    times, configs = extend_to_full_period(path, QuadratureParams(32))
    assert len(times) == 33
    np.testing.assert_allclose(configs, sample_nodes(path, QuadratureParams(32)),
                               atol=1e-14)


def test_full_period_junctions_and_closure():
    rng = np.random.default_rng(14)
    for name in ("figure_eight", "brake_reflection", "two_body_choreography"):
        group = load_group(name)
        path = separated_random_path(rng, group, s=5)
        times, configs = extend_to_full_period(path, QuadratureParams(40))
        assert len(times) == 40 * group.l + 1
        np.testing.assert_allclose(configs[0], configs[-1], atol=1e-10)


def test_full_period_choreography_shift():
    # the figure-eight closure contains a 3-cycle with identity matrix, so
    # q(t + T/3) is a body relabeling of q(t)
    rng = np.random.default_rng(15)
    group = load_group("figure_eight")
    path = separated_random_path(rng, group, s=5)
    nu = 30
    _, configs = extend_to_full_period(path, QuadratureParams(nu))
    shift = nu * group.l // 3
    cyc = next(g for g in group.elements
               if g.time == TimeAction.rotation(Fraction(1, 3))
               and np.allclose(g.mat, np.eye(2)))
    for idx in (0, 5, 17):
        np.testing.assert_allclose(configs[idx + shift],
                                   act_on_config(cyc, configs[idx]),
                                   atol=1e-10)


def test_full_period_detects_asymmetric_path():
    rng = np.random.default_rng(16)
    group = load_group("figure_eight")
    path = FourierPath(group.system, group, 4,
                       rng.normal(size=(6, 3, 2)) + 3.0)
    from varorbit.errors import SymmetryViolation
    with pytest.raises(SymmetryViolation):
        extend_to_full_period(path, QuadratureParams(16))
