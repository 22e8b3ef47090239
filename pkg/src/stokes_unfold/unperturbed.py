"""Closed-form analytic invariants of the unperturbed equation at the origin:
formal data, formal monodromy, singular directions, Stokes matrices and the
actual monodromy around 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .gammas import reciprocal_gamma
from .mat3 import exp_diagonal, identity3
from .series import DEFAULT_DEGREE, SeriesKind, build_series


class Direction(Enum):
    ZERO = "0"
    PI = "pi"


def exponent_matrices(nu) -> tuple[np.ndarray, np.ndarray]:
    """The diagonal pair (Lambda, Q) = (diag(0, nu-2, nu-4), diag(1, 2, 0))."""
    nu = complex(nu)
    lam = np.diag([0.0 + 0j, nu - 2.0, nu - 4.0])
    q = np.diag([1.0 + 0j, 2.0 + 0j, 0j])
    return lam, q


@dataclass(frozen=True)
class FormalData:
    """Formal data at the origin: exponential part and the unipotent factor."""

    nu: complex
    Lambda: np.ndarray
    Q: np.ndarray

    def h_hat(self, x, degree: int = DEFAULT_DEGREE) -> np.ndarray:
        """Truncated unipotent factor: unit diagonal, (1,2) = x^2 phi(x),
        (1,3) = x^4 psi(x)/2, (2,3) = -x^2/2."""
        x = complex(x)
        psi = build_series(self.nu, SeriesKind.PSI, degree).partial_sum(x)
        phi = build_series(self.nu, SeriesKind.PHI, degree).partial_sum(x)
        h = identity3()
        h[0, 1] = x * x * phi
        h[0, 2] = x**4 * psi / 2.0
        h[1, 2] = -x * x / 2.0
        return h


def formal_data(nu) -> FormalData:
    lam, q = exponent_matrices(nu)
    return FormalData(complex(nu), lam, q)


def formal_monodromy(nu) -> np.ndarray:
    """diag(1, e^{2 pi i nu}, e^{2 pi i nu})."""
    lam, _ = exponent_matrices(nu)
    return exp_diagonal(lam, 2j * math.pi)


def _is_nonpositive_integer(nu) -> bool:
    nu = complex(nu)
    return nu.imag == 0.0 and nu.real == round(nu.real) and nu.real <= 0.0


def singular_directions(nu) -> frozenset:
    """{0, pi} in general; empty when the formal series terminate."""
    if _is_nonpositive_integer(nu):
        return frozenset()
    return frozenset({0.0, math.pi})


def stokes_matrix(nu, direction: Direction) -> np.ndarray:
    """Unipotent Stokes matrix for the requested singular direction.

    Direction 0 carries -pi i / Gamma(nu) at entry (1,3); direction pi
    carries -2 pi i e^{-i pi nu} / Gamma(nu) at entry (1,2).  Both entries
    are entire in nu, so non-positive integers give the identity exactly.
    """
    m = identity3()
    if direction is Direction.ZERO:
        m[0, 2] = -1j * math.pi * reciprocal_gamma(nu)
    elif direction is Direction.PI:
        m[0, 1] = -2j * math.pi * cmath.exp(-1j * math.pi * complex(nu)) * reciprocal_gamma(nu)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return m


def monodromy_origin(nu) -> np.ndarray:
    """Actual monodromy around the origin: St_pi St_0 times the formal
    monodromy.  Its inverse is the monodromy around infinity."""
    return stokes_matrix(nu, Direction.PI) @ stokes_matrix(nu, Direction.ZERO) @ formal_monodromy(nu)
