"""Independent verification engine: adaptive Runge-Kutta continuation of the
companion 3x3 system along contour paths, and numerical monodromy compared
with the closed forms through conjugacy invariants (eigenvalue multisets,
determinant, Jordan structure) rather than raw matrices, because the
numerical frame differs from the closed-form solution frame by an unknown
constant conjugation.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import GuardError, PathError, ResonanceError, StepUnderflowError, ToleranceError
from .mat3 import as_matrix3, identity3, inverse3, max_abs
from .paths import ContourPath, circle, concat
from .perturbed import (
    PerturbParams,
    ResonanceClass,
    characteristic_exponents,
    classify_resonance,
    coefficients_a,
    residues,
)
from .unperturbed import monodromy_origin

STIFFNESS_LIMIT = 12.0
CLEARANCE_FACTOR = 1e-3
JORDAN_RTOL = 1e-4
_EIG_GROUP_TOL = 1e-8
_MAX_STEPS = 200_000

# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


@dataclass(frozen=True)
class CompanionSystem:
    """Y' = A(x) Y with A upper bidiagonal: diagonal from the factor
    coefficients, ones on the superdiagonal.

    ``params = None`` selects the unperturbed equation with its irregular
    point at the origin.
    """

    params: PerturbParams | None
    nu: complex

    @classmethod
    def perturbed(cls, params: PerturbParams) -> "CompanionSystem":
        return cls(params, params.nu)

    @classmethod
    def unperturbed(cls, nu) -> "CompanionSystem":
        return cls(None, complex(nu))

    def matrix(self, x) -> np.ndarray:
        x = complex(x)
        if self.params is None:
            a1 = 1.0 / (x * x)
            a2 = (self.nu - 2.0) / x + 2.0 / (x * x)
            a3 = (self.nu - 4.0) / x
        else:
            a1, a2, a3 = coefficients_a(self.params, x)
        a = np.zeros((3, 3), dtype=complex)
        a[0, 0] = a1
        a[1, 1] = a2
        a[2, 2] = a3
        a[0, 1] = 1.0
        a[1, 2] = 1.0
        return a

    def singularities(self) -> tuple:
        if self.params is None:
            return (0j,)
        return (complex(self.params.x_L), complex(self.params.x_R))

    def clearance(self) -> float:
        scale = 1.0 if self.params is None else self.params.sqrt_eps
        return CLEARANCE_FACTOR * scale


@dataclass(frozen=True)
class MonodromyReport:
    """Numerical monodromy with its frame-independent comparison data."""

    M_numeric: np.ndarray
    eigenvalues_numeric: tuple
    eigenvalues_closed: tuple
    log_detected: bool
    max_invariant_error: float


def integrate_path(system: CompanionSystem, path: ContourPath, y0, tol: float = 1e-9) -> np.ndarray:
    """Transport the fundamental matrix along ``path`` (local error <= tol
    per step, embedded 5(4) pair with a PI step controller)."""
    y = as_matrix3(y0).astype(complex)
    inverse3(y)  # rejects non-invertible initial data
    clearance = system.clearance()
    for sing in system.singularities():
        if path.min_distance(sing) < clearance:
            raise PathError(
                f"path passes within {path.min_distance(sing):.3e} of the singular point {sing}"
            )
    for segment in path:
        y = _integrate_segment(system, segment, y, tol)
    return y


def _integrate_segment(system: CompanionSystem, segment, y: np.ndarray, tol: float) -> np.ndarray:
    def rhs(s: float, m: np.ndarray) -> np.ndarray:
        return segment.velocity(s) * (system.matrix(segment.point(s)) @ m)

    s = 0.0
    h = 0.05
    err_prev = 1.0
    k = [None] * 7
    k[0] = rhs(0.0, y)
    for _ in range(_MAX_STEPS):
        if s >= 1.0:
            return y
        h = min(h, 1.0 - s)
        if h < 1e-12:
            raise StepUnderflowError(f"step size underflow at s = {s:.6f} on {segment}")
        for i in range(1, 7):
            acc = sum(aij * k[j] for j, aij in enumerate(_DP_A[i]) if aij != 0.0)
            k[i] = rhs(s + _DP_C[i] * h, y + h * acc)
        y5 = y + h * sum(b * k[i] for i, b in enumerate(_DP_B5) if b != 0.0)
        err_mat = h * sum((b5 - b4) * k[i] for i, (b5, b4) in enumerate(zip(_DP_B5, _DP_B4)))
        err = max_abs(err_mat) / max(1.0, max_abs(y5))
        if err <= tol:
            s += h
            y = y5
            k[0] = rhs(s, y)  # first-same-as-last restart
            factor = 0.9 * (tol / max(err, 1e-300)) ** 0.2 * (err_prev / tol) ** 0.04
            err_prev = max(err, 1e-300)
            h *= min(5.0, max(0.2, factor))
        else:
            h *= max(0.1, 0.9 * (tol / err) ** 0.25)
    raise ToleranceError("step budget exhausted before reaching the end of the segment")


def _match_eigenvalues(numeric, closed):
    """Optimal assignment (exhaustive for n = 3) of numeric to closed
    eigenvalues; returns (max matched distance, numeric tuple reordered)."""
    best_err = math.inf
    best_order = None
    for perm in itertools.permutations(range(3)):
        err = max(abs(numeric[perm[i]] - closed[i]) for i in range(3))
        if err < best_err:
            best_err = err
            best_order = perm
    return best_err, tuple(numeric[i] for i in best_order)


def _repeated_groups(closed):
    """[(value, multiplicity)] for eigenvalues repeated within 1e-8."""
    groups = []
    for v in closed:
        for i, (w, m) in enumerate(groups):
            if abs(v - w) < _EIG_GROUP_TOL:
                groups[i] = (w, m + 1)
                break
        else:
            groups.append((v, 1))
    return [(v, m) for v, m in groups if m >= 2]


def detect_log_structure(m, closed_eigenvalues, rtol: float = JORDAN_RTOL) -> bool:
    """True when M is non-semisimple at a repeated eigenvalue.

    A semisimple eigenvalue of multiplicity k leaves rank(M - lambda I) at
    3 - k; the (3-k)-th singular value rising above rtol * scale flags a
    Jordan block.  Rank is conjugation invariant, so the test works in the
    numerical frame.
    """
    m = as_matrix3(m)
    scale = max(1.0, max_abs(m))
    for value, mult in _repeated_groups(closed_eigenvalues):
        sv = np.linalg.svd(m - value * np.eye(3), compute_uv=False)
        if sv[3 - mult] > rtol * scale:
            return True
    return False


def _build_report(m, closed, det_closed) -> MonodromyReport:
    numeric = tuple(np.linalg.eigvals(m))
    err_eig, ordered = _match_eigenvalues(numeric, closed)
    err_det = abs(np.linalg.det(m) - det_closed) / max(1.0, abs(det_closed))
    return MonodromyReport(
        M_numeric=m,
        eigenvalues_numeric=ordered,
        eigenvalues_closed=tuple(closed),
        log_detected=detect_log_structure(m, closed),
        max_invariant_error=float(max(err_eig, err_det)),
    )


def loop_around(params: PerturbParams, which: str) -> ContourPath:
    """The standard loops based at x0 = 0: a circle of radius sqrt(eps)
    around x_R starting at angle pi, or around x_L starting at angle 0."""
    s = params.sqrt_eps
    if which == "R":
        return circle(params.x_R, s, angle_start=math.pi)
    if which == "L":
        return circle(params.x_L, s, angle_start=0.0)
    raise ValueError("which must be 'L' or 'R'")


def closed_loop_eigenvalues(params: PerturbParams, which: str) -> tuple:
    """Eigenvalue multiset {e^{2 pi i rho_1}, e^{2 pi i (rho_2 - 1)},
    e^{2 pi i (rho_3 - 2)}} of the closed-form monodromy at side ``which``."""
    e = characteristic_exponents(params)
    rho = e.rho_R if which == "R" else e.rho_L
    return tuple(cmath.exp(2j * math.pi * (rho[k] - k)) for k in range(3))


def numerical_monodromy(params: PerturbParams, which: str, tol: float = 1e-9,
                        allow_stiff: bool = False) -> MonodromyReport:
    """Monodromy of the identity-normalized solution at x0 = 0 around the
    requested singular point, with conjugacy-invariant comparison data.

    Refuses 1/sqrt(eps) > 12 unless ``allow_stiff``: beyond that the local
    exponents drive the dynamic range on the loop past what double
    precision tracks reliably.
    """
    if 1.0 / params.sqrt_eps > STIFFNESS_LIMIT and not allow_stiff:
        raise GuardError(
            f"1/sqrt(eps) = {1.0 / params.sqrt_eps:.3f} exceeds the stiffness guard {STIFFNESS_LIMIT}"
        )
    cls = classify_resonance(params)
    if cls not in (ResonanceClass.B, ResonanceClass.C):
        raise ResonanceError(f"closed-form comparison needs class B or C, got {cls.value}")
    system = CompanionSystem.perturbed(params)
    m = integrate_path(system, loop_around(params, which), identity3(), tol)
    closed = closed_loop_eigenvalues(params, which)
    det_closed = closed[0] * closed[1] * closed[2]
    return _build_report(m, closed, det_closed)


def expected_log_flag(params: PerturbParams, which: str) -> bool:
    """Whether the closed forms predict a logarithm (d != 0) at this side."""
    res = residues(params)
    d = res.d_R3 if which == "R" else res.d_L2
    return abs(d) > 1e-12


def unperturbed_monodromy(nu, radius: float = 1.0, tol: float = 1e-9) -> MonodromyReport:
    """Loop of the given radius around the origin of the unperturbed
    equation, compared against the closed-form monodromy there."""
    if not 0.5 <= radius <= 2.0:
        raise ValueError("radius must lie in [0.5, 2]")
    system = CompanionSystem.unperturbed(nu)
    m = integrate_path(system, circle(0.0, radius), identity3(), tol)
    m0 = monodromy_origin(nu)
    closed = tuple(np.diag(m0))  # triangular, eigenvalues on the diagonal
    det_closed = closed[0] * closed[1] * closed[2]
    return _build_report(m, closed, det_closed)


def composed_loop_matrix(params: PerturbParams, tol: float = 1e-9,
                         allow_stiff: bool = False) -> np.ndarray:
    """Continuation around gamma_R followed by gamma_L from the same base
    point; its eigenvalues match those of the closed-form inverse monodromy
    at infinity."""
    if 1.0 / params.sqrt_eps > STIFFNESS_LIMIT and not allow_stiff:
        raise GuardError("stiffness guard")
    system = CompanionSystem.perturbed(params)
    path = concat(loop_around(params, "R"), loop_around(params, "L"))
    return integrate_path(system, path, identity3(), tol)
