"""Determinant scans against predictions and truncation checks of exact operator identities."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import linalg as sla

from .asymptotics import AsymptoticPrediction, full_prediction, predict_value
from .constants import hankel_F
from .errors import ConditioningError, HypothesisError, ValidationError
from .factorization import log_series
from .structured import (
    CONDITION_LIMIT,
    LogDet,
    compose_reduction_rhs,
    condition_estimate,
    hankel,
    log_det,
    th_matrix,
    toeplitz,
    truncated_inverse,
)
from .symbols import FourierSeries, ProblemSpec, SmoothSpec, assemble_pair, fourier_smooth

DEFAULT_N_GRID = (16, 32, 64, 128, 256)
DEFAULT_SERIES_N = 4096
DEFAULT_WINDOW = 16
LHS_WORK = 1 << 15
# residuals this small are rounding noise; a curve sitting entirely below it has already converged
ROUNDOFF_FLOOR = 1e-13


def decreasing_trend(values: Sequence[float]) -> bool:
    """``final < first`` and at least ``ceil((len-1)/2)`` strictly decreasing steps."""
    v = list(values)
    if len(v) < 2:
        return False
    steps = sum(b < a for a, b in zip(v, v[1:]))
    return bool(v[-1] < v[0] and steps >= math.ceil((len(v) - 1) / 2))


@dataclass
class ScanRow:
    n: int
    true: LogDet
    pred: LogDet

    @property
    def log_ratio(self) -> complex:
        return self.true - self.pred

    @property
    def ratio(self) -> complex:
        return cmath.exp(self.log_ratio)

    @property
    def error(self) -> float:
        return abs(self.ratio - 1.0)


@dataclass
class ConvergenceReport:
    rows: list
    prediction: AsymptoticPrediction
    p_hat: Optional[float] = None
    log_G_hat: Optional[float] = None
    log_E_hat: Optional[float] = None
    fit_ok: bool = False

    @property
    def errors(self) -> list:
        return [r.error for r in self.rows]

    @property
    def trend_ok(self) -> bool:
        return decreasing_trend(self.errors)


@dataclass
class ResidualCurve:
    rows: list  # (N, residual)
    label: str = ""
    notes: list = field(default_factory=list)

    @property
    def residuals(self) -> list:
        return [r for _, r in self.rows]

    @property
    def decays(self) -> bool:
        res = self.residuals
        return bool(decreasing_trend(res) or (res and max(res) <= ROUNDOFF_FLOOR))

    def final(self) -> float:
        return self.rows[-1][1]


def det_scan(
    spec: ProblemSpec,
    n_grid: Sequence[int] = DEFAULT_N_GRID,
    N: Optional[int] = None,
    prediction: Optional[AsymptoticPrediction] = None,
    N_work: Optional[int] = None,
) -> ConvergenceReport:
    """Compare ``log det M_n(a, b)`` with the closed-form prediction on ``n_grid``.

    ``N`` is the number of Fourier coefficients kept on each side; sizes
    needing more than that raise a range error.
    """
    pred = prediction or full_prediction(spec)
    n_grid = sorted(set(int(n) for n in n_grid))
    if not n_grid or n_grid[0] < 1:
        raise ValidationError("n_grid must contain positive sizes")
    N = N or max(DEFAULT_SERIES_N, 2 * n_grid[-1])
    a, b = assemble_pair(spec, N, N_work)
    rows = [ScanRow(n, log_det(th_matrix(a, b, n)), predict_value(pred, n)) for n in n_grid]
    report = ConvergenceReport(rows, pred)
    if len(rows) >= 4:
        report.p_hat, report.log_G_hat, report.log_E_hat, report.fit_ok = exponent_fit(report)
    return report


def exponent_fit(report, last: int = 4):
    """Least squares ``log|det| ~ n log G + p log n + const`` over the ``last`` largest sizes.

    Returns ``(p_hat, log_G_hat, const, ok)``; ``ok`` is False for a rank-deficient design.
    Only the log-modulus is fitted, so for complex parameters ``p_hat`` estimates ``Re p``.
    """
    rows = report.rows if hasattr(report, "rows") else report
    if len(rows) < 4:
        raise ValidationError("exponent fit needs at least four sizes")
    rows = sorted(rows, key=lambda r: r.n if hasattr(r, "n") else r[0])[-max(4, last) :]
    n = np.array([r.n if hasattr(r, "n") else r[0] for r in rows], dtype=float)
    y = np.array([r.true.log_modulus if hasattr(r, "true") else r[1] for r in rows], dtype=float)
    A = np.column_stack([n, np.log(n), np.ones_like(n)])
    coef, _, rank, _ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[1]), float(coef[0]), float(coef[2]), bool(rank == 3)


# ---------------------------------------------------------------------------
# Reduction identity
# ---------------------------------------------------------------------------


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / abs(a) if a != 0 else abs(b)


def check_reduction_identity(
    spec: ProblemSpec,
    n: int,
    N_list: Sequence[int] = (256, 512, 1024),
    lhs_work: int = LHS_WORK,
) -> ResidualCurve:
    """Relative gap between ``det M_n(a, b)`` and the determinant of the truncated composite.

    The left side uses a large convolution size so that truncation of the
    composite is the only significant error source.
    """
    spec.validate()
    a, b = assemble_pair(spec, 2 * n, max(lhs_work, 4 * n))
    lhs = log_det(th_matrix(a, b, n)).value
    rows = []
    for N in sorted(N_list):
        if N < n:
            raise ValidationError(f"outer truncation N = {N} is below n = {n}")
        rhs = log_det(compose_reduction_rhs(spec, n, N)).value
        rows.append((N, _relative(lhs, rhs)))
    return ResidualCurve(rows, label="reduction", notes=[f"det M_n = {lhs!r}"])


def check_pure_reduction(spec: ProblemSpec, n: int, N_list: Sequence[int] = (256, 512, 1024)) -> ResidualCurve:
    """The identity with ``c = d = 1``: ``det M_n(a_0, b_0)`` against the jump-only composite."""
    curve = check_reduction_identity(spec.stripped(), n, N_list)
    curve.label = "pure-reduction"
    return curve


# ---------------------------------------------------------------------------
# Fundamental identities
# ---------------------------------------------------------------------------


def _toeplitz_block(f: FourierSeries, rows: int, cols: int) -> np.ndarray:
    return sla.toeplitz(f[np.arange(rows)], f[-np.arange(cols)])


def _hankel_block(f: FourierSeries, rows: int, cols: int) -> np.ndarray:
    return sla.hankel(f[np.arange(1, rows + 1)], f[np.arange(rows, rows + cols)])


def check_fundamental_identities(
    a_spec: SmoothSpec,
    b_spec: SmoothSpec,
    m: int = DEFAULT_WINDOW,
    N_list: Sequence[int] = (32, 64, 128, 256),
) -> dict:
    """Residual curves for ``T(ab) = T(a)T(b) + H(a)H(b~)`` and ``H(ab) = T(a)H(b) + H(a)T(b~)``.

    Products are formed with inner dimension ``N``; residuals are relative
    Frobenius norms on the leading ``m x m`` window.
    """
    t1, h1 = [], []
    ab_spec = a_spec.times(b_spec)
    for N in sorted(N_list):
        K = N + 2 * m + 1
        a, b, ab = fourier_smooth(a_spec, K), fourier_smooth(b_spec, K), fourier_smooth(ab_spec, K)
        bt = b.flip()
        T_ab = _toeplitz_block(ab, m, m)
        rhs = _toeplitz_block(a, m, N) @ _toeplitz_block(b, N, m) + _hankel_block(a, m, N) @ _hankel_block(bt, N, m)
        t1.append((N, np.linalg.norm(T_ab - rhs) / max(np.linalg.norm(T_ab), 1e-300)))
        H_ab = _hankel_block(ab, m, m)
        rhs = _toeplitz_block(a, m, N) @ _hankel_block(b, N, m) + _hankel_block(a, m, N) @ _toeplitz_block(bt, N, m)
        h1.append((N, np.linalg.norm(H_ab - rhs) / max(np.linalg.norm(H_ab), 1e-300)))
    return {"T1": ResidualCurve(t1, "T1"), "H1": ResidualCurve(h1, "H1")}


# ---------------------------------------------------------------------------
# Inverses of I + H(phi0 psi)
# ---------------------------------------------------------------------------

VARIANTS = {
    "plus": {0: 1.0},
    "minus": {0: -1.0},
    "zinv": {-1: -1.0},
    "ztimes": {1: 1.0},
}


def _check_flip_inverse(psi_spec: SmoothSpec, M: int = 4096) -> None:
    theta = 2 * math.pi * np.arange(M) / M
    if np.max(np.abs(psi_spec(theta) * psi_spec(-theta) - 1.0)) > 1e-10:
        raise ValidationError("psi must satisfy psi(t) psi(1/t) = 1")


def sign_dichotomy(psi_spec: SmoothSpec, N: int = 256) -> int:
    """``+1`` or ``-1``: the leading entry of ``T^{-1}(psi)`` for ``psi psi~ = 1``."""
    _check_flip_inverse(psi_spec)
    psi = fourier_smooth(psi_spec, N)
    coarse = truncated_inverse(psi, max(1, N // 2))[0, 0]
    fine = truncated_inverse(psi, N)[0, 0]
    if abs(fine - coarse) > 1e-6 * max(1.0, abs(fine)):
        raise ValidationError(f"leading entry of T_N^-1(psi) not converged ({coarse} vs {fine})")
    for s in (1, -1):
        if abs(fine - s) < 0.1:
            return s
    raise ValidationError(f"leading entry {fine:.6g} is not near +1 or -1; psi likely violates psi^-1 = psi~")


def _checked_inverse(M: np.ndarray, what: str) -> np.ndarray:
    cond = condition_estimate(M)
    if cond > CONDITION_LIMIT:
        raise ConditioningError(f"{what} is ill-conditioned (estimate {cond:.3g})", cond)
    return np.linalg.inv(M)


def closed_form_inverse(psi_spec: SmoothSpec, variant: str, N: int):
    """``(A_N, X_N)``: the section of ``I + H(phi0 psi)`` and the closed-form inverse assembled at size N."""
    if variant not in VARIANTS:
        raise ValidationError(f"variant must be one of {sorted(VARIANTS)}")
    phi0 = SmoothSpec(coefficients=VARIANTS[variant])
    K = 2 * N
    psi_inv_spec = psi_spec.reciprocal()
    p0 = FourierSeries.from_mapping(K, VARIANTS[variant])
    psi, psi_inv = fourier_smooth(psi_spec, K), fourier_smooth(psi_inv_spec, K)
    b_plus = fourier_smooth(phi0.times(psi_spec), K)
    b_minus = fourier_smooth(phi0.times(psi_inv_spec), K)
    eye = np.eye(N, dtype=complex)
    A = eye + hankel(b_plus, N)
    left = _checked_inverse(toeplitz(psi_inv, N) + hankel(p0, N), "T(psi^-1) + H(phi0)")
    right = _checked_inverse(toeplitz(psi, N) + hankel(p0, N), "T(psi) + H(phi0)")
    X = left @ (eye + hankel(b_minus, N)) @ right
    return A, X


def check_inverse_formula(
    psi_spec: SmoothSpec,
    variant: str,
    m: int = DEFAULT_WINDOW,
    N_list: Sequence[int] = (256, 512, 1024),
) -> ResidualCurve:
    """``||P_m (A_N X_N - I) P_m||_F`` for the closed-form inverse of ``I + H(phi0 psi)``."""
    if variant in ("zinv", "ztimes"):
        if sign_dichotomy(psi_spec) != 1:
            raise HypothesisError(f"variant {variant} requires the leading entry of T^-1(psi) to be +1")
    else:
        _check_flip_inverse(psi_spec)
    rows = []
    for N in sorted(N_list):
        if N < m:
            raise ValidationError("window larger than truncation")
        A, X = closed_form_inverse(psi_spec, variant, N)
        R = (A @ X)[:m, :m] - np.eye(m)
        rows.append((N, float(np.linalg.norm(R))))
    return ResidualCurve(rows, label=variant)


# ---------------------------------------------------------------------------
# Hankel-Toeplitz determinant F[C]
# ---------------------------------------------------------------------------


def hankel_toeplitz_det_check(C_spec: SmoothSpec, phi0: float = 1.0, N: int = 512) -> dict:
    """``det(I + H(C) T^{-1}(C phi0))`` at truncation N against the closed form ``F[C]``."""
    C = fourier_smooth(C_spec, 2 * N)
    Cphi = C * phi0
    inv = truncated_inverse(Cphi, N)
    D = log_det(np.eye(N) + hankel(C, N) @ inv).value
    F = hankel_F(log_series(C_spec, N))
    return {"det": D, "F": F, "relative_error": abs(D - F) / abs(F)}
