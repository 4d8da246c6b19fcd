"""Gamma and Barnes G functions and the closed-form determinant constants."""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import AccuracyWarning, SingularPointError, ValidationError
from .factorization import Factorization, PlusFactor, antisymmetric_plus_factor, wiener_hopf
from .symbols import FourierSeries, ProblemSpec

# zeta'(-1) = 1/12 - log(Glaisher's constant)
ZETA_PRIME_M1 = -0.16542114370045092921391966024278064276063
BARNES_ASYMPTOTIC_RADIUS = 20.0
_BARNES_TERMS = 12


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def log_gamma(z) -> complex:
    """Principal branch of log Gamma (reflection handled inside ``scipy.special.loggamma``)."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise SingularPointError(f"Gamma has a pole at z = {z.real:g}")
    return complex(special.loggamma(z))


def gamma(z) -> complex:
    return cmath.exp(log_gamma(z))


@lru_cache(maxsize=1)
def _barnes_coefficients() -> np.ndarray:
    k = np.arange(1, _BARNES_TERMS + 1)
    bern = special.bernoulli(2 * _BARNES_TERMS + 2)
    return bern[2 * k + 2] / (4.0 * k * (k + 1))


def _log_barnes_large(z: complex) -> complex:
    """``log G(1+z)`` from the large-|z| expansion; intended for ``Re z >= 20``."""
    lz = cmath.log(z)
    s = 0.5 * z * z * (lz - 1.5) + 0.5 * z * math.log(2 * math.pi) - lz / 12.0 + ZETA_PRIME_M1
    zinv2 = 1.0 / (z * z)
    p = zinv2
    for c in _barnes_coefficients():
        s += c * p
        p *= zinv2
    return s


def log_barnes_g(z) -> complex:
    """A logarithm of ``G(z)`` (not necessarily the principal one); ``-inf`` at the zeros."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return complex(-math.inf, 0.0)
    # shift right until the expansion is accurate, then recur back down
    m = max(0, math.ceil(BARNES_ASYMPTOTIC_RADIUS + 1.0 - z.real))
    w = z + m
    s = _log_barnes_large(w - 1.0)
    if m:
        s -= complex(np.sum(special.loggamma(z + np.arange(m))))
    return s


def barnes_g(z) -> complex:
    """Barnes G-function, ``G(1) = 1`` and ``G(z+1) = Gamma(z) G(z)``."""
    lg = log_barnes_g(z)
    if lg.real == -math.inf:
        return 0j
    return cmath.exp(lg)


# ---------------------------------------------------------------------------
# Szego-type constants
# ---------------------------------------------------------------------------


def _tail_check(terms: np.ndarray, what: str) -> None:
    if terms.size < 10:
        return
    total = np.sum(np.abs(terms))
    tail = np.sum(np.abs(terms[-max(1, terms.size // 10) :]))
    if total > 0 and tail > 1e-12 * total:
        warnings.warn(f"{what}: last tenth of the terms exceeds 1e-12 of the sum", AccuracyWarning, stacklevel=3)


def _plus_minus(s: FourierSeries):
    N = s.N
    return s.coefficients[N + 1 :], s.coefficients[:N][::-1]


def szego_pair_log(logA: FourierSeries, logB: FourierSeries) -> complex:
    """``sum_{k>=1} k [log A]_k [log B]_{-k}``."""
    K = min(logA.N, logB.N)
    if K == 0:
        return 0j
    k = np.arange(1, K + 1)
    terms = k * logA.coefficients[logA.N + k] * logB.coefficients[logB.N - k]
    _tail_check(terms, "E[A,B]")
    return complex(np.sum(terms))


def szego_pair_E(logA: FourierSeries, logB: FourierSeries) -> complex:
    """``E[A, B] = exp(sum_{k>=1} k [log A]_k [log B]_{-k})``."""
    return cmath.exp(szego_pair_log(logA, logB))


def szego_E(logC: FourierSeries) -> complex:
    return szego_pair_E(logC, logC)


def hankel_F_log(logC: FourierSeries) -> complex:
    plus, _ = _plus_minus(logC)
    if plus.size == 0:
        return 0j
    k = np.arange(1, plus.size + 1)
    quad = k * plus**2
    _tail_check(quad, "F[C]")
    return complex(-0.5 * np.sum(quad) + np.sum(plus[::2]))


def hankel_F(logC: FourierSeries) -> complex:
    """``F[C] = exp(-1/2 sum k [log C]_k^2 + sum [log C]_{2k-1})``; only plus coefficients enter."""
    return cmath.exp(hankel_F_log(logC))


# ---------------------------------------------------------------------------
# Constants of the separated determinant
# ---------------------------------------------------------------------------


@dataclass
class ConstantBundle:
    E_hat1: complex
    half_power_ratio: complex
    exp_sum: complex
    E_total: complex
    notes: list = field(default_factory=list)


class _PowerLog:
    """Accumulates ``sum s_j log w_j`` using the series logarithm of each base, recording branch departures."""

    def __init__(self):
        self.total = 0j
        self.notes = []

    def add(self, label: str, log_base: complex, exponent: complex) -> None:
        if exponent == 0:
            return
        self.total += exponent * log_base
        principal = cmath.log(cmath.exp(log_base))
        exponent = complex(exponent)
        integral = exponent.imag == 0 and exponent.real == round(exponent.real)
        if abs(principal - log_base) > 1e-12 and not integral:
            self.notes.append(f"{label}: series logarithm {log_base:.6g} used instead of principal {principal:.6g}")


def _interior_points(spec: ProblemSpec):
    for s in spec.pairs:
        yield s, cmath.exp(1j * s.angle), cmath.exp(-1j * s.angle)


def _log_e_hat1(spec: ProblemSpec, fact_c: Factorization, d_plus: PlusFactor, acc: _PowerLog) -> None:
    cp, cm, dp = fact_c.log_plus, fact_c.log_minus, d_plus.log_at
    # boundary points: c0^{-alpha} e+^{alpha+beta} = c+^{beta} c-^{-alpha} d+^{alpha+beta}
    for label, t, a, b in (("+1", 1.0, spec.alpha_plus, spec.beta_plus), ("-1", -1.0, spec.alpha_minus, spec.beta_minus)):
        acc.add(f"c+({label})", cp(t), b)
        acc.add(f"c-({label})", cm(t), -a)
        acc.add(f"d+({label})", dp(t), a + b)
    for r, (s, tau, taubar) in enumerate(_interior_points(spec), 1):
        g = s.gamma
        for label, t, a in ((f"tau_{r}", tau, s.alpha_plus), (f"conj tau_{r}", taubar, s.alpha_minus)):
            acc.add(f"c+({label})", cp(t), g - a)
            acc.add(f"c-({label})", cm(t), -a)
            acc.add(f"d+({label})", dp(t), g)


def e_hat1(spec: ProblemSpec, fact_c: Factorization, d_plus: PlusFactor) -> complex:
    """Point-evaluation constant built from ``c_+, c_-, d_+`` at the singular points.

    In the reducible cases (equal ``alpha_r^{+-}``, ``beta_r = 0``) the
    ``c_+`` factors at interior points cancel.
    """
    acc = _PowerLog()
    _log_e_hat1(spec, fact_c, d_plus, acc)
    return cmath.exp(acc.total)


def exp_sum_log(fact_c: Factorization, d_plus: PlusFactor) -> complex:
    """``sum k [log c]_k [log c]_{-k} - 1/2 sum k ([log c]_k + [log d]_k)^2``."""
    lc = fact_c.log_series
    cross = szego_pair_log(lc, lc)
    plus = np.array(fact_c.plus_log, dtype=complex)
    ld = np.asarray(d_plus.log_coefficients, dtype=complex)
    K = max(plus.size, ld.size)
    e = np.zeros(K, dtype=complex)
    e[: plus.size] += plus
    e[: ld.size] += ld
    if K == 0:
        return cross
    k = np.arange(1, K + 1)
    quad = k * e**2
    _tail_check(quad, "exp-sum")
    return cross - 0.5 * complex(np.sum(quad))


def constant_E(spec: ProblemSpec, fact_c: Factorization, d_plus: PlusFactor) -> ConstantBundle:
    """The smooth-part constant ``E = E_hat1 * (e_+(1)/e_+(-1))^{1/2} * exp(...)`` with ``e_+ = c_+ d_+``."""
    acc = _PowerLog()
    _log_e_hat1(spec, fact_c, d_plus, acc)
    log_e1 = acc.total
    log_ratio = fact_c.log_plus(1.0) + d_plus.log_at(1.0) - fact_c.log_plus(-1.0) - d_plus.log_at(-1.0)
    half = 0.5 * log_ratio
    principal_half = 0.5 * cmath.log(cmath.exp(log_ratio))
    notes = list(acc.notes)
    if abs(cmath.exp(half) - cmath.exp(principal_half)) > 1e-12 * abs(cmath.exp(half)):
        notes.append("half-power ratio: series branch differs from the principal square root by a sign")
    es = exp_sum_log(fact_c, d_plus)
    E1, H, X = cmath.exp(log_e1), cmath.exp(half), cmath.exp(es)
    return ConstantBundle(E1, H, X, cmath.exp(log_e1 + half + es), notes)


def smooth_parts(spec: ProblemSpec, N: int = 256):
    """Wiener-Hopf data ``(fact_c, d_plus)`` for the smooth parts of ``spec``."""
    if N < 1:
        raise ValidationError("need at least one coefficient for the smooth factors")
    fact_c = wiener_hopf(spec.c, N)
    d_plus = PlusFactor.trivial(N) if spec.d.is_one else antisymmetric_plus_factor(spec.d, N)
    return fact_c, d_plus
