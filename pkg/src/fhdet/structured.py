"""Finite Toeplitz, Hankel and Toeplitz+Hankel matrices and their determinants."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .errors import ConditioningError, SeriesRangeError
from .symbols import FourierSeries, ProblemSpec, located_product

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class LogDet:
    """``det = exp(log_modulus) * exp(i phase)``; ``log_modulus = -inf`` marks a singular matrix."""

    log_modulus: float
    phase: float = 0.0

    @classmethod
    def from_log(cls, z: complex) -> "LogDet":
        z = complex(z)
        return cls(z.real, _wrap(z.imag))

    @property
    def value(self) -> complex:
        if self.log_modulus == -math.inf:
            return 0j
        return complex(np.exp(self.log_modulus + 1j * self.phase))

    @property
    def log(self) -> complex:
        return complex(self.log_modulus, self.phase)

    def __sub__(self, other: "LogDet") -> complex:
        """Log of the ratio ``self / other`` with phase wrapped to (-pi, pi]."""
        return complex(self.log_modulus - other.log_modulus, _wrap(self.phase - other.phase))


def _wrap(phase: float) -> float:
    w = math.remainder(phase, 2 * math.pi)
    return math.pi if w == -math.pi else w


def toeplitz(f: FourierSeries, n: int) -> np.ndarray:
    """``T_n(f)`` with entries ``f_{j-k}``."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if n - 1 > f.N:
        raise SeriesRangeError(f"T_{n} needs |k| <= {n - 1} but series has N = {f.N}")
    col = f[np.arange(n)]
    row = f[-np.arange(n)]
    return sla.toeplitz(col, row)


def hankel(f: FourierSeries, n: int) -> np.ndarray:
    """``H_n(f)`` with entries ``f_{j+k+1}``."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if 2 * n - 1 > f.N:
        raise SeriesRangeError(f"H_{n} needs k <= {2 * n - 1} but series has N = {f.N}")
    return sla.hankel(f[np.arange(1, n + 1)], f[np.arange(n, 2 * n)])


def th_matrix(a: FourierSeries, b: FourierSeries, n: int) -> np.ndarray:
    """``M_n(a, b) = T_n(a) + H_n(b)``."""
    return toeplitz(a, n) + hankel(b, n)


def log_det(M) -> LogDet:
    """Log-determinant through LU with partial pivoting."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if n == 0:
        return LogDet(0.0, 0.0)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    lu, piv, _ = lapack.zgetrf(M)
    diag = np.diag(lu)
    if np.any(diag == 0):
        return LogDet(-math.inf, 0.0)
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    phase = float(np.sum(np.angle(diag))) + (math.pi if swaps % 2 else 0.0)
    return LogDet(float(np.sum(np.log(np.abs(diag)))), _wrap(phase))


def condition_estimate(M) -> float:
    """One-norm condition number estimate from the LU factors (LAPACK ``zgecon``)."""
    M = np.asarray(M, dtype=complex)
    lu, piv, info = lapack.zgetrf(M)
    if info > 0:
        return math.inf
    anorm = np.linalg.norm(M, 1)
    rcond, info = lapack.zgecon(lu, anorm, norm="1")
    return math.inf if rcond == 0 else 1.0 / rcond


def truncated_inverse(psi: FourierSeries, N: int, limit: float = CONDITION_LIMIT) -> np.ndarray:
    """Dense inverse of the section ``T_N(psi)``, the finite proxy for ``T^{-1}(psi)``."""
    T = toeplitz(psi, N)
    lu, piv, info = lapack.zgetrf(T)
    cond = math.inf
    if info == 0:
        rcond, _ = lapack.zgecon(lu, np.linalg.norm(T, 1), norm="1")
        cond = math.inf if rcond == 0 else 1.0 / rcond
    if cond > limit:
        raise ConditioningError(f"T_{N}(psi) is ill-conditioned (estimate {cond:.3g})", cond)
    inv, info = lapack.zgetri(lu, piv)
    return inv


def compose_reduction_rhs(spec: ProblemSpec, n: int, N: Optional[int] = None, N_work: Optional[int] = None) -> np.ndarray:
    """``P_n T_N^{-1}(psi) M_N(c, c d phi) T_N^{-1}(psi^{-1}) P_n`` for the jump symbols of ``spec``."""
    N = N or max(32 * n, 512)
    spec.validate()
    psi = located_product(spec.psi_factors(1.0), N, N_work=N_work)
    psi_inv = located_product(spec.psi_factors(-1.0), N, N_work=N_work)
    c = located_product([], N, spec.c, N_work=N_work)
    cd_phi = located_product(spec.phi_factors(), 2 * N, spec.c.times(spec.d), N_work=N_work)
    left = truncated_inverse(psi, N)[:n, :]
    right = truncated_inverse(psi_inv, N)[:, :n]
    middle = th_matrix(c, cd_phi, N)
    return left @ middle @ right
