"""The two divergent power-series families attached to the origin.

Family ``PSI`` has coefficients c_n = nu(nu+1)...(nu+n-1); family ``PHI``
carries the alternating sign (-1)^n.  Both solve first-order inhomogeneous
equations, terminate exactly at non-positive integer ``nu``, are Gevrey of
order 1 with explicit constants, and have elementary Borel transforms
(1 -+ zeta)^(-nu).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import BranchCutError

DEFAULT_DEGREE = 60
CUT_TOLERANCE = 1e-12


class SeriesKind(Enum):
    PSI = "psi"  # Borel transform (1 - zeta)^(-nu), singular direction 0
    PHI = "phi"  # Borel transform (1 + zeta)^(-nu), singular direction pi


@dataclass(frozen=True)
class AsymptoticSeries:
    nu: complex
    kind: SeriesKind
    coefficients: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def partial_sum(self, x, terms: int | None = None) -> complex:
        """Horner evaluation of sum c_n x^n over n < terms (default: all)."""
        cs = self.coefficients if terms is None else self.coefficients[:terms]
        acc = 0j
        for c in reversed(cs):
            acc = acc * complex(x) + c
        return acc


def build_series(nu, kind: SeriesKind, degree: int = DEFAULT_DEGREE) -> AsymptoticSeries:
    """Coefficients c_0..c_degree by the product recursion c_{n+1} = +-(nu+n) c_n.

    The recursion, rather than Gamma ratios, keeps the terminating cases
    exact: once a factor vanishes every later coefficient is exactly zero.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    nu = complex(nu)
    sign = 1.0 if kind is SeriesKind.PSI else -1.0
    cs = [1.0 + 0j]
    for n in range(degree):
        cs.append(sign * (nu + n) * cs[-1])
    return AsymptoticSeries(nu, kind, tuple(cs))


def gevrey_constants(nu) -> tuple[float, float]:
    """(C, A) with |c_n| <= C A^n n!: C = 1 and A = 1 (|nu| <= 1) or |nu|+1."""
    a = abs(complex(nu))
    return 1.0, 1.0 if a <= 1.0 else a + 1.0


def gevrey_bound_check(series: AsymptoticSeries) -> bool:
    """Whether every stored coefficient obeys the order-1 Gevrey bound.

    Compared in log space so long series never overflow.
    """
    _, a = gevrey_constants(series.nu)
    log_a = math.log(a)
    for n, c in enumerate(series.coefficients):
        if c == 0:
            continue
        if math.log(abs(c)) > n * log_a + math.lgamma(n + 1) + 1e-12:
            return False
    return True


def ode_residual_coefficients(series: AsymptoticSeries) -> list:
    """Coefficients (degrees 0..N+1) of the defining equation applied to the
    truncated series, minus its right-hand side.

    PSI: x^2 u' + (nu x - 1) u + 1.  PHI: x^2 u' + (nu x + 1) u - 1.
    All entries through degree N vanish identically; only the degree-(N+1)
    truncation tail can survive, and it too vanishes for terminating series.
    """
    cs = series.coefficients
    nu = complex(series.nu)
    top = len(cs) - 1
    res = [0j] * (top + 2)
    if series.kind is SeriesKind.PSI:
        res[0] = 1.0 - cs[0]
        for n in range(top):
            res[n + 1] = (nu + n) * cs[n] - cs[n + 1]
    else:
        res[0] = cs[0] - 1.0
        for n in range(top):
            res[n + 1] = (nu + n) * cs[n] + cs[n + 1]
    res[top + 1] = (nu + top) * cs[top]
    return res


def borel_transform_value(nu, kind: SeriesKind, zeta) -> complex:
    """(1 - zeta)^(-nu) for PSI, (1 + zeta)^(-nu) for PHI, principal branch.

    The branch cut sits on zeta in [1, inf) resp. (-inf, -1]; evaluation
    within 1e-12 of the cut raises BranchCutError.
    """
    zeta = complex(zeta)
    w = 1.0 - zeta if kind is SeriesKind.PSI else 1.0 + zeta
    if abs(w.imag) < CUT_TOLERANCE and w.real < CUT_TOLERANCE:
        raise BranchCutError(f"zeta = {zeta} lies on the branch cut of the Borel transform")
    return cmath.exp(-complex(nu) * cmath.log(w))
