"""ODE-continuation oracle: the integrator itself and the monodromy reports."""

import cmath
import math

import numpy as np
import pytest

import stokes_unfold as su
from stokes_unfold import CompanionSystem, PerturbParams
from stokes_unfold.errors import GuardError, PathError, SingularMatrixError
from stokes_unfold.oracle import (
    closed_loop_eigenvalues,
    composed_loop_matrix,
    expected_log_flag,
    loop_around,
)
from stokes_unfold.paths import Arc, ContourPath, Line, circle, polyline


class FrozenSystem:
    """Constant-coefficient system for closed-form comparison."""

    def __init__(self, a):
        self.a = np.asarray(a, dtype=complex)

    def matrix(self, x):
        return self.a

    def singularities(self):
        return ()

    def clearance(self):
        return 0.0


def series_exp(a, terms=25):
    out = np.eye(3, dtype=complex)
    power = np.eye(3, dtype=complex)
    for k in range(1, terms):
        power = power @ a / k
        out = out + power
    return out


def test_constant_coefficient_against_series_exponential():
    a = np.diag([-1.0, -2.0, 0.0]).astype(complex)
    a[0, 1] = a[1, 2] = 1.0
    system = FrozenSystem(a)
    y = su.integrate_path(system, polyline(0.0, 1.0), np.eye(3), tol=1e-11)
    assert su.max_abs(y - series_exp(a)) <= 1e-10


def test_contractible_loop_is_identity():
    params = PerturbParams(0.5, 0.25)
    system = CompanionSystem.perturbed(params)
    loop = circle(2.0, 0.4)
    y = su.integrate_path(system, loop, np.eye(3), tol=1e-9)
    assert su.max_abs(y - np.eye(3)) <= 1e-8


def test_path_clearance_precondition():
    params = PerturbParams(0.5, 0.25)
    system = CompanionSystem.perturbed(params)
    with pytest.raises(PathError):
        su.integrate_path(system, polyline(0.0, 0.25), np.eye(3))


def test_initial_matrix_must_be_invertible():
    params = PerturbParams(0.5, 0.25)
    system = CompanionSystem.perturbed(params)
    with pytest.raises(SingularMatrixError):
        su.integrate_path(system, polyline(0.0, 0.1), np.zeros((3, 3)))


def test_scalar_and_companion_routes_agree():
    # transporting the expanded scalar equation and the factored system from
    # matched initial data gives the same first component
    params = PerturbParams(0.8, 0.25)

    class ScalarCompanion:
        def matrix(self, x):
            c2, c1, c0 = su.scalar_form_coefficients(params, x)
            m = np.zeros((3, 3), dtype=complex)
            m[0, 1] = 1.0
            m[1, 2] = 1.0
            m[2] = [-c0, -c1, -c2]
            return m

        def singularities(self):
            return (complex(params.x_L), complex(params.x_R))

        def clearance(self):
            return 1e-3 * params.sqrt_eps

    x0, x1 = 0.5, 1.1
    path = polyline(x0, x1)
    scalar_end = su.integrate_path(ScalarCompanion(), path, np.eye(3), tol=1e-11)

    # initial data conversion: rows (y, L1 y, L2 L1 y) in terms of (y, y', y'')
    def conversion(x):
        a1, a2, _ = su.coefficients_a(params, x)
        h = 1e-6
        a1p = (su.coefficients_a(params, x + h)[0] - su.coefficients_a(params, x - h)[0]) / (2 * h)
        t = np.zeros((3, 3), dtype=complex)
        t[0, 0] = 1.0
        t[1] = [-a1, 1.0, 0.0]
        t[2] = [a2 * a1 - a1p, -(a1 + a2), 1.0]
        return t

    system = CompanionSystem.perturbed(params)
    special_end = su.integrate_path(system, path, conversion(x0), tol=1e-11)
    # first row of both transports is y(x1) for the three basis solutions
    assert su.max_abs(special_end[0] - scalar_end[0]) <= 1e-8


def test_first_component_satisfies_scalar_equation():
    # 4th-order finite differences of the transported first component on a
    # uniform grid, pushed through the expanded scalar equation; the stride-2
    # stencils sit above the per-sample integration jitter
    params = PerturbParams(0.8, 0.25)
    system = CompanionSystem.perturbed(params)
    x0, x1 = 0.8, 1.2
    n = 480
    h = (x1 - x0) / n
    xs = [x0 + k * h for k in range(n + 1)]
    ys = []
    y = np.eye(3, dtype=complex)
    for a, b in zip(xs, xs[1:]):
        ys.append(y[0, 0])
        y = su.integrate_path(system, polyline(a, b), y, tol=1e-12)
    ys.append(y[0, 0])

    def derivatives(k, stride):
        hh = stride * h
        f = lambda j: ys[k + j * stride]
        d1 = (f(-2) - 8 * f(-1) + 8 * f(1) - f(2)) / (12 * hh)
        d2 = (-f(-2) + 16 * f(-1) - 30 * f(0) + 16 * f(1) - f(2)) / (12 * hh * hh)
        d3 = (f(-3) - 8 * f(-2) + 13 * f(-1) - 13 * f(1) + 8 * f(2) - f(3)) / (8 * hh**3)
        return np.array([d1, d2, d3])

    worst = 0.0
    for k in range(6, n - 5, 7):
        d1, d2, d3 = derivatives(k, 2)
        c2, c1, c0 = su.scalar_form_coefficients(params, xs[k])
        worst = max(worst, abs(d3 + c2 * d2 + c1 * d1 + c0 * ys[k]))
    assert worst <= 1e-6


def test_loop_reversal_gives_inverse_eigenvalues():
    from stokes_unfold.oracle import _match_eigenvalues

    params = PerturbParams.from_resonant_index(0.5, 1)
    system = CompanionSystem.perturbed(params)
    loop = loop_around(params, "R")
    m = su.integrate_path(system, loop, np.eye(3), tol=1e-10)
    m_rev = su.integrate_path(system, loop.reversed(), np.eye(3), tol=1e-10)
    err, _ = _match_eigenvalues(tuple(np.linalg.eigvals(m)), tuple(1.0 / np.linalg.eigvals(m_rev)))
    assert err <= 1e-6


@pytest.mark.parametrize(
    "nu,n,which",
    [(0.5, 1, "R"), (0.5, 2, "R"), (2.0, 1, "L"), (2.0, 2, "R")],
)
def test_numerical_monodromy_matches_closed_invariants(nu, n, which):
    params = PerturbParams.from_resonant_index(nu, n)
    report = su.numerical_monodromy(params, which, tol=1e-10)
    assert report.max_invariant_error <= 1e-6
    assert report.log_detected == expected_log_flag(params, which)
    assert abs(np.linalg.det(report.M_numeric)) > 0


def test_numerical_monodromy_no_log_when_d_vanishes():
    params = PerturbParams.from_resonant_index(-1.0, 2)
    report = su.numerical_monodromy(params, "R", tol=1e-10)
    assert report.log_detected is False
    assert report.max_invariant_error <= 1e-6


def test_composed_loops_match_infinity_relation():
    params = PerturbParams.from_resonant_index(0.5, 1)
    m = composed_loop_matrix(params, tol=1e-10)
    st_l, st_r = su.unfolded_stokes(params)
    m_hat = su.formal_monodromy(params.nu)
    closed = np.linalg.eigvals(st_l @ st_r @ m_hat)
    from stokes_unfold.oracle import _match_eigenvalues

    err, _ = _match_eigenvalues(tuple(np.linalg.eigvals(m)), tuple(closed))
    assert err <= 1e-5


def test_stiffness_guard():
    params = PerturbParams.from_resonant_index(0.5, 50)
    with pytest.raises(GuardError):
        su.numerical_monodromy(params, "L")


def test_stiffness_guard_override():
    # 1/sqrt(eps) = 12.5 sits just past the guard; the override still works
    params = PerturbParams.from_resonant_index(0.5, 6)
    report = su.numerical_monodromy(params, "R", tol=1e-10, allow_stiff=True)
    assert report.max_invariant_error <= 1e-5


def test_unperturbed_monodromy_reports():
    rep = su.unperturbed_monodromy(0.0, radius=1.0, tol=1e-9)
    assert su.max_abs(rep.M_numeric - np.eye(3)) <= 1e-6
    assert rep.log_detected is False

    rep = su.unperturbed_monodromy(0.5, radius=1.0, tol=1e-9)
    matched = sorted(rep.eigenvalues_numeric, key=lambda v: v.real)
    assert abs(matched[0] + 1.0) <= 1e-6
    assert abs(matched[1] + 1.0) <= 1e-6
    assert abs(matched[2] - 1.0) <= 1e-6
    assert rep.log_detected is False  # distinct-eigenvalue block is semisimple

    rep = su.unperturbed_monodromy(3.0, radius=1.0, tol=1e-9)
    assert max(abs(v - 1.0) for v in rep.eigenvalues_numeric) <= 1e-6
    assert rep.log_detected is True


def test_unperturbed_radius_bounds():
    with pytest.raises(ValueError):
        su.unperturbed_monodromy(0.5, radius=0.3)


def test_radius_independence():
    r1 = su.unperturbed_monodromy(0.5, radius=0.7, tol=1e-9)
    r2 = su.unperturbed_monodromy(0.5, radius=1.3, tol=1e-9)
    e1 = sorted(r1.eigenvalues_numeric, key=lambda v: (round(v.real, 6), round(v.imag, 6)))
    e2 = sorted(r2.eigenvalues_numeric, key=lambda v: (round(v.real, 6), round(v.imag, 6)))
    assert max(abs(a - b) for a, b in zip(e1, e2)) <= 1e-6
    assert r1.log_detected == r2.log_detected


def test_base_point_independence():
    # same invariants from the standard base point 0 and from i sqrt(eps)/2
    params = PerturbParams.from_resonant_index(0.5, 1)
    s = params.sqrt_eps
    system = CompanionSystem.perturbed(params)
    m1 = su.integrate_path(system, loop_around(params, "L"), np.eye(3), tol=1e-10)
    base = 0.5j * s
    m2 = su.integrate_path(
        system,
        circle(params.x_L, abs(base - params.x_L), angle_start=cmath.phase(base - params.x_L)),
        np.eye(3),
        tol=1e-10,
    )
    e1 = sorted(np.linalg.eigvals(m1), key=lambda v: (round(v.real, 6), round(v.imag, 6)))
    e2 = sorted(np.linalg.eigvals(m2), key=lambda v: (round(v.real, 6), round(v.imag, 6)))
    assert max(abs(a - b) for a, b in zip(e1, e2)) <= 1e-6


def test_determinant_matches_exponent_sum():
    params = PerturbParams.from_resonant_index(0.5, 1)
    report = su.numerical_monodromy(params, "R", tol=1e-10)
    e = su.characteristic_exponents(params)
    det_closed = cmath.exp(2j * math.pi * (sum(e.rho_R) - 3.0))
    assert abs(np.linalg.det(report.M_numeric) - det_closed) <= 1e-6


def test_closed_loop_eigenvalues_at_resonance():
    # at resonance the eigenvalue multisets collapse to the constant pattern
    nu = 0.5
    params = PerturbParams.from_resonant_index(nu, 2)
    eig_r = closed_loop_eigenvalues(params, "R")
    assert eig_r[0] == pytest.approx(cmath.exp(1j * math.pi * nu), abs=1e-12)
    assert eig_r[1] == pytest.approx(cmath.exp(3j * math.pi * nu), abs=1e-12)
    assert eig_r[2] == pytest.approx(cmath.exp(1j * math.pi * nu), abs=1e-12)


def test_paths_geometry():
    with pytest.raises(PathError):
        ContourPath([Line(0.0, 1.0), Line(2.0, 3.0)])  # endpoint mismatch
    arc = Arc(0.0, 1.0, 0.0, math.pi)
    assert arc.point(0.0) == pytest.approx(1.0)
    assert arc.point(1.0) == pytest.approx(-1.0)
    assert arc.length == pytest.approx(math.pi)
    loop = circle(1.0, 0.5, angle_start=math.pi)
    assert loop.start == pytest.approx(0.5)
    assert loop.min_distance(1.0) == pytest.approx(0.5)
    assert loop.min_distance(1.6) == pytest.approx(0.1)
    seg = Line(0.0, 1.0)
    assert seg.min_distance(0.5 + 0.25j) == pytest.approx(0.25)
    assert seg.min_distance(-0.3) == pytest.approx(0.3)
