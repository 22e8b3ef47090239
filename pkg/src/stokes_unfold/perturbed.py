"""The perturbed Fuchsian equation with singular points at +-sqrt(eps).

Covers the rational coefficients and their scalar expansion, characteristic
exponents and indicial data at the three singular points, the resonance
classification, the residue coefficients that gate logarithmic terms, the
monodromy matrices at a logarithmic resonance, and the unfolded Stokes
matrices.  Closed forms hold in the two resonance families where
n = 1/(2 sqrt(eps)) - nu/2 is a non-negative integer; everything else
raises ResonanceError.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    BranchCutError,
    DivergentIntegralError,
    OrdinaryPointError,
    PathError,
    ResonanceError,
    SingularPointError,
)
from .gammas import reciprocal_gamma, rising_factorial
from .mat3 import exp_diagonal, exp_first_row_nilpotent, max_abs
from .quad import integrate_chain, integrate_segment, jacobi_panel
from .unperturbed import exponent_matrices

INTEGRALITY_TOL = 1e-9
_SINGULARITY_MARGIN = 1e-12
_LGAMMA_CROSSOVER = 64  # resonance index above which Gamma ratios go through lgamma
_JACOBI_MAX_EXPONENT = 40.0


class ResonanceClass(Enum):
    B = "B"
    C = "C"
    D = "D"
    OTHER_RESONANT = "other-resonant"
    NON_RESONANT = "non-resonant"


class SingularPoint(Enum):
    XL = "xL"
    XR = "xR"
    INFINITY = "infinity"


class OffDiagonal(Enum):
    PHI12 = "phi12"
    PHI13 = "phi13"


class ResidueKind(Enum):
    L2 = "L2"
    R3 = "R3"


@dataclass(frozen=True)
class PerturbParams:
    """Parameter pair (nu, sqrt(eps)) with 0 < sqrt(eps) < 1."""

    nu: complex
    sqrt_eps: float

    def __post_init__(self):
        object.__setattr__(self, "nu", complex(self.nu))
        object.__setattr__(self, "sqrt_eps", float(self.sqrt_eps))
        if not (0.0 < self.sqrt_eps < 1.0):
            raise ValueError("sqrt_eps must lie in (0, 1); the unperturbed equation is a separate object")

    @classmethod
    def from_resonant_index(cls, nu, n: int) -> "PerturbParams":
        """Parameters on the resonant sequence 1/sqrt(eps) = nu + 2 n."""
        nu = complex(nu)
        if nu.imag != 0.0:
            raise ValueError("resonant sequences are defined for real nu")
        scale = nu.real + 2.0 * n
        if scale <= 1.0:
            raise ValueError(f"nu + 2 n = {scale} must exceed 1")
        return cls(nu, 1.0 / scale)

    @property
    def eps(self) -> float:
        return self.sqrt_eps**2

    @property
    def x_L(self) -> float:
        return -self.sqrt_eps

    @property
    def x_R(self) -> float:
        return self.sqrt_eps


@dataclass(frozen=True)
class ExponentData:
    """Characteristic exponents at x_R, x_L, infinity and their differences."""

    rho_R: tuple
    rho_L: tuple
    rho_inf: tuple
    delta_R21: complex
    delta_L21: complex
    delta_R32: complex
    delta_L32: complex
    delta_R31: complex
    delta_L31: complex


@dataclass(frozen=True)
class ResidueData:
    """Log-term coefficients and the nilpotent matrices built from them."""

    d_L2: complex
    d_R3: complex
    T_L: np.ndarray
    T_R: np.ndarray
    d_R2: complex = 0j
    d_L3: complex = 0j


def characteristic_exponents(params: PerturbParams) -> ExponentData:
    nu = params.nu
    h = 1.0 / (2.0 * params.sqrt_eps)
    rho_r = (h, nu / 2.0 + 2.0 * h, nu / 2.0)
    rho_l = (-h, nu / 2.0 - 2.0 * h, nu / 2.0)
    rho_inf = (0j, 1.0 - nu, 2.0 - nu)
    d_r21 = nu / 2.0 + h
    d_l21 = nu / 2.0 - h
    return ExponentData(
        rho_R=rho_r,
        rho_L=rho_l,
        rho_inf=rho_inf,
        delta_R21=d_r21,
        delta_L21=d_l21,
        delta_R32=-2.0 * h,
        delta_L32=2.0 * h,
        delta_R31=d_l21,
        delta_L31=d_r21,
    )


def _check_off_singularities(params: PerturbParams, x: complex) -> None:
    if min(abs(x - params.x_R), abs(x - params.x_L)) < _SINGULARITY_MARGIN:
        raise SingularPointError(f"x = {x} is a singular point of the equation")


def _partial_fraction_weights(params: PerturbParams):
    """Weights (w_R, w_L) of a_k(x) = w_R/(x-x_R) + w_L/(x-x_L), k = 1, 2, 3."""
    e = characteristic_exponents(params)
    return [(e.rho_R[k] - k, e.rho_L[k] - k) for k in range(3)]


def coefficients_a(params: PerturbParams, x) -> tuple:
    """Coefficients a_1, a_2, a_3 of the first-order factors d/dx - a_k.

    Each one is determined by the characteristic exponents alone:
    a_k = (rho_R_k - (k-1))/(x - x_R) + (rho_L_k - (k-1))/(x - x_L).
    """
    x = complex(x)
    _check_off_singularities(params, x)
    return tuple(
        wr / (x - params.x_R) + wl / (x - params.x_L)
        for (wr, wl) in _partial_fraction_weights(params)
    )


def _a_with_derivatives(params: PerturbParams, x: complex, orders=(2, 1, 0)):
    """[a_k, a_k', ...] up to the requested derivative order for k = 1, 2, 3."""
    out = []
    for (wr, wl), top in zip(_partial_fraction_weights(params), orders):
        vals = []
        for o in range(top + 1):
            fac = (-1.0) ** o * math.factorial(o)
            vals.append(fac * (wr / (x - params.x_R) ** (o + 1) + wl / (x - params.x_L) ** (o + 1)))
        out.append(vals)
    return out


def scalar_form_coefficients(params: PerturbParams, x) -> tuple:
    """(c2, c1, c0) of the expanded scalar equation y''' + c2 y'' + c1 y' + c0 y = 0.

    Obtained by composing the three first-order factors; with each factor
    d/dx - a_k the expansion is
      c2 = -(a1 + a2 + a3)
      c1 = a1 a2 + a1 a3 + a2 a3 - 2 a1' - a2'
      c0 = a1' a2 + a1 a2' - a1'' + a3 a1' - a1 a2 a3.
    """
    x = complex(x)
    _check_off_singularities(params, x)
    (a1, a1p, a1pp), (a2, a2p), (a3,) = _a_with_derivatives(params, x)
    c2 = -(a1 + a2 + a3)
    c1 = a1 * a2 + a1 * a3 + a2 * a3 - 2.0 * a1p - a2p
    c0 = a1p * a2 + a1 * a2p - a1pp + a3 * a1p - a1 * a2 * a3
    return c2, c1, c0


def infinity_form_coefficients(params: PerturbParams, t) -> tuple:
    """Normalized coefficients of the equation after x = 1/t, used for the
    indicial data at infinity."""
    t = complex(t)
    if t == 0:
        raise SingularPointError("t = 0 must be approached by a limit")
    c2, c1, c0 = scalar_form_coefficients(params, 1.0 / t)
    big_c2 = 6.0 / t - c2 / t**2
    big_c1 = 6.0 / t**2 - 2.0 * c2 / t**3 + c1 / t**4
    big_c0 = -c0 / t**6
    return big_c2, big_c1, big_c0


def _near_integer(v, tol: float = INTEGRALITY_TOL) -> bool:
    v = complex(v)
    return abs(v.imag) <= tol and abs(v.real - round(v.real)) <= tol


def classify_resonance(params: PerturbParams) -> ResonanceClass:
    """Resonance type from the integrality pattern of the exponent differences.

    B: both delta_R21 and delta_L21 integral; C: only delta_L21; D: only
    delta_R21.  Any remaining integral difference (necessarily one of the
    +-1/sqrt(eps) pair) is OTHER_RESONANT.
    """
    e = characteristic_exponents(params)
    r21 = _near_integer(e.delta_R21)
    l21 = _near_integer(e.delta_L21)
    if r21 and l21:
        return ResonanceClass.B
    if l21:
        return ResonanceClass.C
    if r21:
        return ResonanceClass.D
    if _near_integer(e.delta_L32):
        return ResonanceClass.OTHER_RESONANT
    return ResonanceClass.NON_RESONANT


def resonance_index(params: PerturbParams) -> int:
    """n = 1/(2 sqrt(eps)) - nu/2, validated as a non-negative integer."""
    val = 1.0 / (2.0 * params.sqrt_eps) - params.nu / 2.0
    if not _near_integer(val) or round(val.real) < 0:
        raise ResonanceError(
            f"1/(2 sqrt_eps) - nu/2 = {val} is not a non-negative integer; "
            "no logarithmic closed forms apply"
        )
    return int(round(val.real))


def indicial_roots(params: PerturbParams, point: SingularPoint, step_scale: float = 1e-4) -> tuple:
    """Roots of the indicial cubic at the requested singular point.

    The cubic coefficients b_i = lim c_i(x) (x - x_j)^{3-i} come from
    Richardson-extrapolated limits (steps h, h/2, h/4: the step is kept
    large enough to stay above the cancellation floor of the coefficient
    evaluation, and the extrapolation removes both Taylor terms).  The
    roots are ordered to align with the closed-form exponent tuple.
    """
    if point is SingularPoint.INFINITY:
        if _near_integer(params.nu) and round(params.nu.real) == 0:
            raise OrdinaryPointError("infinity is an ordinary point when nu = 0")
        coeff = lambda h: infinity_form_coefficients(params, h)
        h0 = step_scale
    else:
        x_j = params.x_R if point is SingularPoint.XR else params.x_L
        coeff = lambda h: scalar_form_coefficients(params, x_j + h)
        h0 = step_scale * params.sqrt_eps
    samples = [coeff(h0), coeff(h0 / 2.0), coeff(h0 / 4.0)]
    b = []
    for idx, i in enumerate((2, 1, 0)):
        g1, g2, g4 = (s[idx] * (h0 / 2.0**k) ** (3 - i) for k, s in enumerate(samples))
        r1 = 2.0 * g2 - g1
        r2 = 2.0 * g4 - g2
        b.append((4.0 * r2 - r1) / 3.0)
    b2, b1, b0 = b
    roots = np.roots([1.0, b2 - 3.0, 2.0 - b2 + b1, b0])
    e = characteristic_exponents(params)
    target = {
        SingularPoint.XR: e.rho_R,
        SingularPoint.XL: e.rho_L,
        SingularPoint.INFINITY: e.rho_inf,
    }[point]
    ordered = []
    pool = list(roots)
    for t in target:
        j = int(np.argmin([abs(r - t) for r in pool]))
        ordered.append(complex(pool.pop(j)))
    return tuple(ordered)


def diagonal_solutions(params: PerturbParams, x) -> tuple:
    """Diagonal entries Phi1, Phi2, Phi3 and the closed-form Phi23.

    Factorwise principal branches of (x - x_R)^a (x - x_L)^b, so the cuts
    run along (-inf, x_R] and (-inf, x_L]; evaluation on a cut raises.
    """
    x = complex(x)
    s = params.sqrt_eps
    nu = params.nu
    if abs(x.imag) < _SINGULARITY_MARGIN and x.real <= s + _SINGULARITY_MARGIN:
        raise BranchCutError(f"x = {x} lies on a branch cut of the diagonal solutions")
    lr = cmath.log(x - s)
    ll = cmath.log(x + s)
    z = 1.0 / (2.0 * s)
    phi1 = cmath.exp(z * (lr - ll))
    phi2 = cmath.exp(0.5 * (nu - 2.0) * (lr + ll) + 2.0 * z * (lr - ll))
    phi3 = cmath.exp(0.5 * (nu - 4.0) * (lr + ll))
    phi23 = -0.5 * cmath.exp(0.5 * (nu - 2.0) * (lr + ll))
    return phi1, phi2, phi3, phi23


def _real_axis_diag(params: PerturbParams, x: float) -> tuple:
    """Diagonal entries on the real trajectories |x| > sqrt(eps), using the
    real positive determination of (x^2 - eps)^p and of the factor ratio."""
    s = params.sqrt_eps
    nu = params.nu
    if abs(x) <= s:
        raise SingularPointError("real-axis determination needs |x| > sqrt(eps)")
    log_q = math.log(x * x - s * s)
    log_ratio = math.log((x - s) / (x + s)) if x > s else math.log((s - x) / (-x - s))
    z = 1.0 / (2.0 * s)
    phi1 = cmath.exp(z * log_ratio)
    phi2 = cmath.exp(0.5 * (nu - 2.0) * log_q + 2.0 * z * log_ratio)
    phi3 = cmath.exp(0.5 * (nu - 4.0) * log_q)
    phi23 = -0.5 * cmath.exp(0.5 * (nu - 2.0) * log_q)
    return phi1, phi2, phi3, phi23


def ratio_integral_check(a: float, b: float, x: float, tol: float = 1e-10) -> tuple:
    """Quadrature and closed form of int_{-a}^x (s+a)^{b-1}/(s-a)^{b+1} ds
    along the negative real axis, for a > 0, b > 1, x < -a.

    Closed form: -(1/(2ab)) ((x+a)/(x-a))^b.  Substituting tau = -(s+a)
    makes the integrand tau^{b-1} (2a+tau)^{-(b+1)}, real and positive, so
    a Gauss-Jacobi endpoint panel plus adaptive panels settle it without
    branch bookkeeping.
    """
    a = float(a)
    b = float(b)
    x = float(x)
    if not (a > 0 and b > 1 and x < -a):
        raise ValueError("need a > 0, b > 1 and x < -a")
    span = -(x + a)
    g = lambda tau: np.exp(-(b + 1.0) * np.log(2.0 * a + tau))
    split = min(span, a)
    val = jacobi_panel(g, 0.0, split, b - 1.0)
    if span > split:
        f = lambda tau: np.exp((b - 1.0) * np.log(tau)) * g(tau)
        val += integrate_segment(f, split, span, tol_abs=tol)
    quadrature = -val
    closed = -1.0 / (2.0 * a * b) * ((x + a) / (x - a)) ** b
    return complex(quadrature), complex(closed)


def log_resonant_d_values(nu, n: int) -> tuple[complex, complex]:
    """Closed-form (d_L2, d_R3) at resonance index n.

    Both equal (phase) z^{1-nu} (nu)^{(n)} / n! with z = n + nu/2; the
    phase for d_L2 is e^{i pi (1-nu)}, i.e. the (-z)^{1-nu} branch with
    log(-r) = ln r + i pi, the choice pinned by the confluence limits.
    Non-positive integer nu gives exact zeros once n >= 1 - nu; smaller n
    sit outside the derived closed forms and raise.
    """
    nu = complex(nu)
    if n < 0:
        raise ResonanceError("resonance index must be >= 0")
    if _near_integer(nu) and round(nu.real) <= 0:
        if n >= 1 - round(nu.real):
            return 0j, 0j
        raise ResonanceError(
            "for integer nu <= 0 the closed forms need nu/2 + 1/(2 sqrt_eps) >= 1"
        )
    z = n + nu / 2.0
    if n > _LGAMMA_CROSSOVER and nu.imag == 0.0:
        log_ratio = (
            (1.0 - nu.real) * math.log(z.real)
            + math.lgamma(n + nu.real)
            - math.lgamma(n + 1.0)
        )
        w = math.exp(log_ratio) * reciprocal_gamma(nu)
    else:
        w = z ** (1.0 - nu) * rising_factorial(nu, n) / math.factorial(n)
    phase = cmath.exp(1j * math.pi * (1.0 - nu))
    return phase * w, -0.5 * w


def residues(params: PerturbParams) -> ResidueData:
    """Residue data (d values and the nilpotent matrices T_L, T_R).

    Only the logarithmic-resonance classes B and C carry residue closed
    forms; class D and the other patterns produce no logarithmic terms
    and raise ResonanceError.
    """
    cls = classify_resonance(params)
    if cls not in (ResonanceClass.B, ResonanceClass.C):
        raise ResonanceError(f"no logarithmic residue data in resonance class {cls.value}")
    n = resonance_index(params)
    d_l2, d_r3 = log_resonant_d_values(params.nu, n)
    t_l = np.zeros((3, 3), dtype=complex)
    t_l[0, 1] = d_l2
    t_r = np.zeros((3, 3), dtype=complex)
    t_r[0, 2] = d_r3
    return ResidueData(d_L2=d_l2, d_R3=d_r3, T_L=t_l, T_R=t_r)


def residue_numeric_oracle(params: PerturbParams, which: ResidueKind, nodes: int = 4096) -> complex:
    """Contour-integral evaluation of the residue coefficients.

    Trapezoid rule with ``nodes`` points on a circle of radius sqrt(eps)/2
    around the relevant singular point.  The pole factor has the integer
    exponent n+1 and winds harmlessly; the other factor's argument is
    tracked continuously around the circle, anchored at -pi on the negative
    real axis, which is the determination matching the Gamma closed forms.
    """
    cls = classify_resonance(params)
    if cls not in (ResonanceClass.B, ResonanceClass.C):
        raise ResonanceError(f"no residue oracle in resonance class {cls.value}")
    n = resonance_index(params)
    s = params.sqrt_eps
    z = 1.0 / (2.0 * s)
    p = z + params.nu / 2.0 - 1.0  # branch-point exponent (integer only in class B)
    if which is ResidueKind.L2:
        center, other, anchor, prefactor = -s, s, -math.pi, 1.0
    elif which is ResidueKind.R3:
        center, other, anchor, prefactor = s, -s, 0.0, -0.5
    else:
        raise ValueError(f"unknown residue kind {which!r}")
    r = s / 2.0
    phi = 2.0 * math.pi * np.arange(nodes) / nodes
    xs = center + r * np.exp(1j * phi)
    w = xs - other
    ang = np.unwrap(np.angle(w))
    ang += anchor - ang[0]
    outer = np.exp(p * (np.log(np.abs(w)) + 1j * ang))
    inner = (r * np.exp(1j * phi)) ** (-(n + 1))
    total = (r / nodes) * np.sum(outer * inner * np.exp(1j * phi))
    return prefactor * complex(total)


def monodromy_exponent_factor(params: PerturbParams, side: str) -> np.ndarray:
    """Diagonal factor exp(pi i (Lambda + Q / x_j)) for side "L" or "R"."""
    lam, q = exponent_matrices(params.nu)
    x_j = params.x_L if side == "L" else params.x_R
    return exp_diagonal(lam + q / x_j, 1j * math.pi)


def monodromy_matrices(params: PerturbParams) -> tuple[np.ndarray, np.ndarray]:
    """(M_L, M_R) as products of the diagonal exponent factor and the
    unipotent exponential of 2 pi i T_j.

    At a logarithmic resonance the two factors commute; the commutator is
    verified to 1e-12 as a guard against misuse.
    """
    res = residues(params)
    out = []
    for side, t in (("L", res.T_L), ("R", res.T_R)):
        d = monodromy_exponent_factor(params, side)
        u = exp_first_row_nilpotent(t, 2j * math.pi)
        m = d @ u
        if max_abs(m - u @ d) > 1e-12 * max(1.0, max_abs(m)):
            raise ResonanceError("exponent factor and unipotent factor fail to commute")
        out.append(m)
    return out[0], out[1]


def unfolded_stokes(params: PerturbParams) -> tuple[np.ndarray, np.ndarray]:
    """(St_L(eps), St_R(eps)) = (exp(2 pi i T_L), exp(2 pi i T_R))."""
    res = residues(params)
    return (
        exp_first_row_nilpotent(res.T_L, 2j * math.pi),
        exp_first_row_nilpotent(res.T_R, 2j * math.pi),
    )


def offdiag_solution_quadrature(params: PerturbParams, x, which: OffDiagonal,
                                tol: float = 1e-10) -> complex:
    """Iterated-integral entries Phi12 / Phi13 by quadrature on the real paths.

    PHI12 integrates from x_R to real x > x_R; PHI13 from x_L to real
    x < x_L.  Values use the real-trajectory determination (positive real
    powers along the path).  The algebraic endpoint factor tau^p gets a
    Gauss-Jacobi panel when p is moderate; for large p the factor is
    negligible at the endpoint and plain adaptive panels take over.
    """
    if params.nu.imag != 0.0:
        raise ValueError("offdiagonal quadrature is implemented for real nu")
    nu = params.nu.real
    s = params.sqrt_eps
    z = 1.0 / (2.0 * s)
    x = complex(x)
    if abs(x.imag) > 1e-13:
        raise PathError("integration paths run along the real axis; x must be real")
    xr = x.real
    p = z + nu / 2.0 - 1.0  # endpoint exponent at the base singular point
    q = z - nu / 2.0 + 1.0
    if p <= -1.0:
        raise DivergentIntegralError("endpoint exponent <= -1: the defining integral diverges")
    if which is OffDiagonal.PHI12:
        if xr <= s + _SINGULARITY_MARGIN:
            raise PathError("PHI12 needs real x > x_R")
        span = xr - s
    elif which is OffDiagonal.PHI13:
        if xr >= -s - _SINGULARITY_MARGIN:
            raise PathError("PHI13 needs real x < x_L")
        span = -xr - s
    else:
        raise ValueError(f"unknown entry {which!r}")

    if p <= _JACOBI_MAX_EXPONENT:
        split = min(span, s)
        g = lambda tau: np.exp(-q * np.log(2.0 * s + tau))
        integral = jacobi_panel(g, 0.0, split, p)
    else:
        # the integrand exp(p log tau - q log(2s+tau)) increases toward the
        # endpoint; cut where it is 1e-22 of its endpoint value (geometric
        # bisection on the monotone log-integrand), the rest is negligible
        log_h = lambda tau: p * math.log(tau) - q * math.log(2.0 * s + tau)
        target = log_h(span) + math.log(1e-22)
        lo, hi = span * 1e-290, span
        for _ in range(200):
            mid = math.sqrt(lo * hi)
            if log_h(mid) > target:
                hi = mid
            else:
                lo = mid
        split = lo
        integral = 0j
    if span > split:
        # single fused exponential: p and q are large with opposite effect,
        # so the two factors would overflow separately
        f = lambda tau: np.exp(p * np.log(tau) - q * np.log(2.0 * s + tau))
        integral += integrate_chain(f, _geometric_breaks(split, span), tol_abs=tol)
    phi1 = _real_axis_diag(params, xr)[0]
    if which is OffDiagonal.PHI12:
        return complex(phi1 * integral)
    # substituting tau = -(t + sqrt_eps) flips the orientation, so the
    # -(1/2) prefactor of the entry becomes +1/2 against this integral
    return complex(0.5 * phi1 * integral)


def _geometric_breaks(lo: float, hi: float, factor: float = 4.0):
    """Panel breakpoints accumulating geometrically toward ``lo``."""
    pts = [hi]
    v = hi
    while v / factor > lo:
        v /= factor
        pts.append(v)
    pts.append(lo)
    return list(reversed(pts))
