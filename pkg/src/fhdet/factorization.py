"""Winding numbers, logarithms and normalized Wiener-Hopf factors of smooth symbols."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyWarning, DegenerateSymbolError, ValidationError, WindingError
from .symbols import TWO_PI, FourierSeries, SmoothSpec

DEFAULT_GRID = 4096
WINDING_TOL = 1e-6
# a phase step this large between neighbouring samples means the grid does not resolve the curve
MAX_PHASE_STEP = math.pi / 2


def _grid_size(N: int) -> int:
    return max(DEFAULT_GRID, 1 << int(math.ceil(math.log2(8 * (2 * N + 1)))))


def _unwrapped_phase(samples: np.ndarray) -> np.ndarray:
    return np.unwrap(np.angle(samples))


def winding_number(samples) -> int:
    """Winding number of a closed curve sampled on a uniform grid (last point joins the first).

    Raises :class:`WindingError` when neighbouring samples differ in phase by
    more than pi/2, since the count is then a guess.
    """
    samples = np.asarray(samples, dtype=complex)
    if np.min(np.abs(samples)) <= 1e-10:
        raise DegenerateSymbolError("symbol nearly vanishes on the grid (min modulus <= 1e-10)")
    phase = _unwrapped_phase(samples)
    closing = np.angle(samples[0] / samples[-1])
    steps = np.abs(np.append(np.diff(phase), closing))
    if np.max(steps) > MAX_PHASE_STEP:
        raise WindingError("phase changes by more than pi/2 between samples; raise the grid size")
    total = (phase[-1] - phase[0] + closing) / TWO_PI
    w = round(total)
    if abs(total - w) > WINDING_TOL:
        raise WindingError(f"phase total {total:.9f} is not resolved to an integer; raise the grid size")
    return int(w)


def log_series(spec: SmoothSpec, N: int) -> FourierSeries:
    """Fourier coefficients of the continuous logarithm of ``spec``."""
    M = _grid_size(N)
    theta = TWO_PI * np.arange(M) / M
    vals = spec(theta)
    w = winding_number(vals)
    if w != 0:
        raise WindingError(f"winding number {w} != 0: no canonical factorization")
    logs = np.log(np.abs(vals)) + 1j * _unwrapped_phase(vals)
    full = np.fft.fft(logs) / M
    k = np.arange(-N, N + 1)
    s = FourierSeries(full[k % M])
    if N > 0 and s.tail_bound > 1e-10 * max(np.max(np.abs(s.coefficients)), 1e-300):
        s = FourierSeries(s.coefficients, reliable=False)
    return s


def log_one_sided(log_coefficients, t, sign: int = 1) -> complex:
    """``sum_{k>=1} l_k t^{sign k}`` for ``log_coefficients = [l_1, l_2, ...]``.

    Warns with :class:`AccuracyWarning` when the last tenth of the
    coefficients exceeds 1e-8 of the leading magnitude.
    """
    l = np.asarray(log_coefficients, dtype=complex)
    if l.size == 0:
        return 0j
    peak = np.max(np.abs(l))
    tail = np.max(np.abs(l[-max(1, l.size // 10) :]))
    if l.size >= 10 and peak > 1e-13 and tail > 1e-8 * peak:
        warnings.warn("one-sided series tail above 1e-8 of leading magnitude", AccuracyWarning, stacklevel=2)
    k = np.arange(1, l.size + 1)
    powers = np.power(complex(t), sign * k)
    return complex(np.sum(l * powers))


def eval_one_sided(log_coefficients, t, sign: int = 1) -> complex:
    """``exp`` of :func:`log_one_sided`: the value of a normalized factor at ``t``."""
    return complex(np.exp(log_one_sided(log_coefficients, t, sign)))


@dataclass(frozen=True, eq=False)
class Factorization:
    """``c = c_- G[c] c_+`` with ``c_+(0) = c_-(inf) = 1``."""

    log_series: FourierSeries

    @property
    def N(self) -> int:
        return self.log_series.N

    @property
    def log_G(self) -> complex:
        return complex(self.log_series[0])

    @property
    def G(self) -> complex:
        return complex(np.exp(self.log_G))

    @property
    def plus_log(self) -> np.ndarray:
        """``[log c]_k`` for k = 1..N."""
        return self.log_series.coefficients[self.N + 1 :]

    @property
    def minus_log(self) -> np.ndarray:
        """``[log c]_{-k}`` for k = 1..N."""
        return self.log_series.coefficients[: self.N][::-1]

    def log_plus(self, t) -> complex:
        return log_one_sided(self.plus_log, t, 1)

    def log_minus(self, t) -> complex:
        return log_one_sided(self.minus_log, t, -1)

    def c_plus(self, t) -> complex:
        return complex(np.exp(self.log_plus(t)))

    def c_minus(self, t) -> complex:
        return complex(np.exp(self.log_minus(t)))

    def reconstruct(self, theta) -> np.ndarray:
        t = np.exp(1j * np.atleast_1d(np.asarray(theta, dtype=float)))
        k = np.arange(1, self.N + 1)
        plus = np.power.outer(t, k) @ self.plus_log
        minus = np.power.outer(t, -k) @ self.minus_log
        return np.exp(minus + self.log_G + plus)


def wiener_hopf(spec: SmoothSpec, N: int) -> Factorization:
    return Factorization(log_series(spec, N))


@dataclass(frozen=True, eq=False)
class PlusFactor:
    """``d_+ = exp(sum_{k>=1} [log d]_k t^k)`` for an antisymmetric ``d = d~_+^{-1} d_+``."""

    log_coefficients: np.ndarray
    series: FourierSeries

    def log_at(self, t) -> complex:
        return log_one_sided(self.log_coefficients, t, 1)

    def __call__(self, t) -> complex:
        return complex(np.exp(self.log_at(t)))

    @classmethod
    def trivial(cls, N: int = 0) -> "PlusFactor":
        return cls(np.zeros(0, dtype=complex), FourierSeries.delta(N))


def antisymmetric_plus_factor(d_spec: SmoothSpec, N: int) -> PlusFactor:
    """Plus factor of ``d`` with ``d d~ = 1`` and ``d(1) = d(-1) = 1``."""
    as_d = SmoothSpec(d_spec.func, d_spec.coefficients, d_spec.log_coefficients, role="d")
    as_d.validate()
    logs = log_series(as_d, N)
    c = logs.coefficients
    if abs(c[N]) > 1e-10:
        raise ValidationError(f"[log d]_0 = {c[N]:.3g} but G[d] must be 1")
    if N > 0 and np.max(np.abs(c[N + 1 :] + c[:N][::-1])) > 1e-10:
        raise ValidationError("log d is not odd")
    plus = np.array(c[N + 1 :])
    M = _grid_size(N)
    k = np.arange(1, N + 1)
    buf = np.zeros(M, dtype=complex)
    buf[k % M] = plus
    vals = np.exp(np.fft.ifft(buf) * M)
    full = np.fft.fft(vals) / M
    idx = np.arange(-N, N + 1)
    return PlusFactor(plus, FourierSeries(full[idx % M]))
