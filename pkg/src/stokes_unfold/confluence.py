"""Resonant parameter sequences and convergence tables: the unfolded Stokes
matrices exp(2 pi i T_j) against the Stokes matrices of the unperturbed
equation, along 1/sqrt(eps) = nu + 2 n.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gammas import reciprocal_gamma
from .mat3 import identity3, max_abs
from .perturbed import PerturbParams, log_resonant_d_values
from .unperturbed import Direction, stokes_matrix

THREADS_ENV = "STOKES_UNFOLD_THREADS"
_PARALLEL_THRESHOLD = 64  # rows; below this the thread pool is pure overhead


@dataclass(frozen=True)
class ConfluenceRow:
    """One resonance index of the convergence table."""

    n: int
    sqrt_eps: float
    d_L2: complex
    d_R3: complex
    err_L2: float
    err_R3: float
    stokes_err_L: float
    stokes_err_R: float


def resonant_sequence(nu: float, n_min: int, n_max: int) -> list:
    """Parameters with 1/(2 sqrt(eps)) - nu/2 = n exactly, n_min <= n <= n_max."""
    if n_max < n_min:
        raise ValueError("empty resonance index range")
    if float(nu) + 2.0 * n_min <= 1.0:
        raise ValueError(f"nu + 2 n_min = {float(nu) + 2.0 * n_min} must exceed 1")
    return [PerturbParams.from_resonant_index(nu, n) for n in range(n_min, n_max + 1)]


def limit_targets(nu) -> tuple[complex, complex]:
    """Limits of (d_L2, d_R3): (-e^{-i pi nu}/Gamma(nu), -1/(2 Gamma(nu))).

    Both vanish at non-positive integer nu through the entire 1/Gamma.
    """
    rg = reciprocal_gamma(nu)
    return -cmath.exp(-1j * math.pi * complex(nu)) * rg, -0.5 * rg


def gamma_ratio_probe(z: float, alpha) -> complex:
    """Gamma(z + alpha) / (Gamma(z) z^alpha), which tends to 1 as z grows.

    Small non-negative integer alpha reduces to the exact finite product
    prod (1 + k/z); everything else goes through log-Gamma differences so
    z may run into the thousands without overflow.
    """
    z = float(z)
    alpha = complex(alpha)
    if not z > abs(alpha) + 1.0:
        raise ValueError("probe needs z > |alpha| + 1")
    if alpha.imag == 0.0 and alpha.real == round(alpha.real) and 0 <= alpha.real <= 8:
        out = 1.0
        for k in range(int(alpha.real)):
            out *= 1.0 + k / z
        return complex(out)
    if alpha.imag == 0.0:
        return complex(math.exp(math.lgamma(z + alpha.real) - math.lgamma(z) - alpha.real * math.log(z)))
    from scipy.special import loggamma

    return complex(np.exp(loggamma(z + alpha) - loggamma(z) - alpha * np.log(z)))


def _row(nu: float, n: int) -> ConfluenceRow:
    params = PerturbParams.from_resonant_index(nu, n)
    d_l2, d_r3 = log_resonant_d_values(nu, n)
    lim_l2, lim_r3 = limit_targets(nu)
    unfolded_l = identity3()
    unfolded_l[0, 1] = 2j * math.pi * d_l2
    unfolded_r = identity3()
    unfolded_r[0, 2] = 2j * math.pi * d_r3
    return ConfluenceRow(
        n=n,
        sqrt_eps=params.sqrt_eps,
        d_L2=d_l2,
        d_R3=d_r3,
        err_L2=abs(d_l2 - lim_l2),
        err_R3=abs(d_r3 - lim_r3),
        stokes_err_L=max_abs(unfolded_l - stokes_matrix(nu, Direction.PI)),
        stokes_err_R=max_abs(unfolded_r - stokes_matrix(nu, Direction.ZERO)),
    )


def thread_count(requested: int | None = None) -> int:
    """Worker cap: explicit argument, else the environment cap, else auto."""
    if requested is not None and requested > 0:
        return requested
    try:
        cap = int(os.environ.get(THREADS_ENV, "0"))
    except ValueError:
        cap = 0
    if cap > 0:
        return cap
    return min(8, os.cpu_count() or 1)


def confluence_table(nu: float, n_min: int, n_max: int, threads: int | None = None) -> list:
    """ConfluenceRow per index, ordered by n; rows are emitted even when a
    downstream convergence check would fail (the table is the artifact)."""
    resonant_sequence(nu, n_min, n_min)  # validates the range start
    if n_max < n_min:
        raise ValueError("empty resonance index range")
    ns = list(range(n_min, n_max + 1))
    workers = thread_count(threads)
    if workers > 1 and len(ns) >= _PARALLEL_THRESHOLD:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda n: _row(float(nu), n), ns))
    return [_row(float(nu), n) for n in ns]


def fitted_rate(rows, column: str = "stokes_err_R") -> float:
    """Least-squares slope of log(err) against log(n) over the last decade
    of resonance indices present in ``rows``."""
    ns = np.array([r.n for r in rows], dtype=float)
    errs = np.array([getattr(r, column) for r in rows], dtype=float)
    keep = (ns >= ns.max() / 10.0) & (errs > 0.0)
    if int(keep.sum()) < 2:
        raise ValueError("need at least two usable rows in the last decade")
    slope = np.polyfit(np.log(ns[keep]), np.log(errs[keep]), 1)[0]
    return float(slope)
