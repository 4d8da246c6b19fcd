"""Fisher-Hartwig factors, smooth symbol parts and their Fourier coefficients.

Points on the unit circle are always passed as angles in radians. A symbol
``f`` is identified with its Fourier series ``f(e^{i theta}) = sum_k f_k e^{ik theta}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy import special as sp
from scipy.signal import fftconvolve

from .errors import DegenerateSymbolError, SeriesRangeError, SingularPointError, ValidationError

TWO_PI = 2.0 * math.pi
ANGLE_SEPARATION = 1e-9


def _reduce_angle(theta):
    return np.mod(theta, TWO_PI)


# ---------------------------------------------------------------------------
# Fourier series container
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FourierSeries:
    """Coefficients ``f_k`` for ``k = -N..N``.

    ``tail_bound`` is the largest modulus among the outermost 10% of indices
    (``|k| > floor(0.9 N)``); it is derived from the coefficients at
    construction, so every operation returning a new series refreshes it.
    ``reliable`` is cleared when a sampled series was not resolved.
    """

    coefficients: np.ndarray
    reliable: bool = True
    tail_bound: float = field(init=False)

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 1 or len(c) % 2 != 1:
            raise ValueError("coefficient array must have odd length 2N+1")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        N = (len(c) - 1) // 2
        if N == 0:
            tail = 0.0
        else:
            cut = int(math.floor(0.9 * N))
            tail = float(max(np.max(np.abs(c[: N - cut])), np.max(np.abs(c[N + cut + 1 :]))))
        object.__setattr__(self, "tail_bound", tail)

    @property
    def N(self) -> int:
        return (len(self.coefficients) - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    @classmethod
    def delta(cls, N: int, value: complex = 1.0) -> "FourierSeries":
        c = np.zeros(2 * N + 1, dtype=complex)
        c[N] = value
        return cls(c)

    @classmethod
    def from_mapping(cls, N: int, coeffs: Mapping[int, complex]) -> "FourierSeries":
        c = np.zeros(2 * N + 1, dtype=complex)
        for k, v in coeffs.items():
            if abs(k) <= N:
                c[N + k] = v
        return cls(c)

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, k):
        k = np.asarray(k)
        if np.any(np.abs(k) > self.N):
            raise SeriesRangeError(f"index {int(np.max(np.abs(k)))} outside series range N={self.N}")
        return self.coefficients[k + self.N]

    def get(self, k, default=0.0):
        """Like indexing, but indices outside ``[-N, N]`` give ``default``."""
        k = np.asarray(k)
        inside = np.abs(k) <= self.N
        out = np.full(k.shape, default, dtype=complex)
        out[inside] = self.coefficients[k[inside] + self.N]
        return out if out.ndim else complex(out)

    def truncate(self, N: int) -> "FourierSeries":
        if N > self.N:
            c = np.zeros(2 * N + 1, dtype=complex)
            c[N - self.N : N + self.N + 1] = self.coefficients
            return FourierSeries(c, self.reliable)
        return FourierSeries(self.coefficients[self.N - N : self.N + N + 1], self.reliable)

    def flip(self) -> "FourierSeries":
        """Series of ``f(e^{-i theta})`` (index reversal)."""
        return FourierSeries(self.coefficients[::-1], self.reliable)

    def shift(self, m: int) -> "FourierSeries":
        """Series of ``t^m f(t)``, keeping the same N (coefficients pushed out are dropped)."""
        c = np.zeros_like(self.coefficients)
        N = self.N
        if m >= 0:
            c[m:] = self.coefficients[: len(c) - m]
        else:
            c[: len(c) + m] = self.coefficients[-m:]
        if abs(m) > 0 and N > 0:
            lost = self.coefficients[len(c) - m :] if m > 0 else self.coefficients[:-m]
            reliable = self.reliable and (lost.size == 0 or np.max(np.abs(lost)) <= self.tail_bound)
        else:
            reliable = self.reliable
        return FourierSeries(c, reliable)

    def __mul__(self, scalar):
        if isinstance(scalar, FourierSeries):
            return convolve(self, scalar, max(self.N, scalar.N))
        return FourierSeries(self.coefficients * complex(scalar), self.reliable)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        N = max(self.N, other.N)
        return FourierSeries(
            self.truncate(N).coefficients + other.truncate(N).coefficients,
            self.reliable and other.reliable,
        )

    def __sub__(self, other):
        return self + (-other)

    def evaluate(self, theta) -> np.ndarray:
        """Partial Fourier sum at the given angles."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        k = self.indices
        return np.exp(1j * np.outer(theta, k)) @ self.coefficients

    def on_grid(self, M: int) -> np.ndarray:
        """Values of the partial sum at ``theta_j = 2 pi j / M`` (requires ``M > 2N``)."""
        if M <= 2 * self.N:
            raise ValueError("grid too coarse for this series")
        buf = np.zeros(M, dtype=complex)
        k = self.indices
        buf[k % M] = self.coefficients
        return np.fft.ifft(buf) * M


# ---------------------------------------------------------------------------
# Pointwise evaluation of singular factors
# ---------------------------------------------------------------------------


def _check_off_point(phi, theta, what):
    red = _reduce_angle(np.asarray(theta, dtype=float) - phi)
    if np.any(np.minimum(red, TWO_PI - red) < 1e-14):
        raise SingularPointError(f"{what} evaluated at its singular point theta = {phi}")


def eval_jump(phi: float, beta: complex, theta):
    """``u_{tau,beta}(e^{i theta}) = exp(i beta (theta - phi - pi))`` with ``theta - phi`` in (0, 2 pi)."""
    _check_off_point(phi, theta, "jump factor")
    red = _reduce_angle(np.asarray(theta, dtype=float) - phi)
    return np.exp(1j * complex(beta) * (red - math.pi))


def eval_zero(phi: float, alpha: complex, theta):
    """``v_{tau,alpha}(e^{i theta}) = (2 - 2 cos(theta - phi))^alpha`` (principal power)."""
    alpha = complex(alpha)
    base = 2.0 - 2.0 * np.cos(np.asarray(theta, dtype=float) - phi)
    base = np.maximum(base, 0.0)
    if np.any(base == 0.0):
        if alpha.real <= 0:
            raise SingularPointError(f"zero/pole factor with Re alpha <= 0 evaluated at theta = {phi}")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(base > 0, np.exp(alpha * np.log(np.where(base > 0, base, 1.0))), 0.0)
    if alpha == 0:
        out = np.ones_like(out)
    return out.astype(complex)


def eval_fh(phi: float, alpha: complex, beta: complex, theta):
    """Combined factor ``v_{tau,alpha} u_{tau,beta}`` at one point of the circle."""
    out = eval_zero(phi, alpha, theta)
    if complex(beta) != 0:
        out = out * eval_jump(phi, beta, theta)
    return out


def eval_eta(phi: float, gamma: complex, t):
    """``(1 - t/tau)^gamma``, branch analytic in the disc with value 1 at 0."""
    t = np.asarray(t, dtype=complex)
    tau = np.exp(1j * phi)
    w = 1.0 - t / tau
    if np.any(np.abs(w) == 0):
        raise SingularPointError("eta evaluated at tau")
    # Re w >= 0 on the closed disc, so the principal log is the continuous branch.
    return np.exp(complex(gamma) * np.log(w))


def eval_xi(phi: float, delta: complex, t):
    """``(1 - tau/t)^delta``, branch analytic outside the disc with value 1 at infinity."""
    t = np.asarray(t, dtype=complex)
    tau = np.exp(1j * phi)
    w = 1.0 - tau / t
    if np.any(np.abs(w) == 0):
        raise SingularPointError("xi evaluated at tau")
    return np.exp(complex(delta) * np.log(w))


# ---------------------------------------------------------------------------
# Closed-form Fourier coefficients
# ---------------------------------------------------------------------------


def _fh_half(alpha: complex, beta: complex, K: int) -> np.ndarray:
    """Coefficients k = 0..K of v_{1,alpha} u_{1,beta}.

    (-1)^k Gamma(1+2a) / (Gamma(1+a+b-k) Gamma(1+a-b+k)); small k directly,
    larger k by the two-term ratio so nothing overflows.
    """
    out = np.zeros(K + 1, dtype=complex)
    k0 = min(K, int(math.ceil(abs((alpha + beta).real))) + 2)
    k = np.arange(k0 + 1)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    out[: k0 + 1] = sign * sp.gamma(1 + 2 * alpha) * sp.rgamma(1 + alpha + beta - k) * sp.rgamma(1 + alpha - beta + k)
    if K > k0:
        kk = np.arange(k0, K)
        out[k0 + 1 :] = out[k0] * np.cumprod((kk - alpha - beta) / (kk + 1 + alpha - beta))
    return out


def _located(values: np.ndarray, phi: float, N: int) -> np.ndarray:
    k = np.arange(-N, N + 1)
    if phi == 0.0:
        return values
    if phi == math.pi:
        return values * np.where(k % 2 == 0, 1.0, -1.0)
    return values * np.exp(-1j * k * phi)


def fourier_fh(phi: float, alpha: complex, beta: complex, N: int) -> FourierSeries:
    """Coefficients of ``v_{tau,alpha} u_{tau,beta}`` with ``tau = e^{i phi}``."""
    alpha, beta = complex(alpha), complex(beta)
    if alpha.real <= -0.5:
        raise ValidationError("zero/pole factor requires Re alpha > -1/2")
    pos = _fh_half(alpha, beta, N)
    neg = _fh_half(alpha, -beta, N)
    vals = np.concatenate([neg[:0:-1], pos])
    return FourierSeries(_located(vals, phi, N))


def fourier_jump(phi: float, beta: complex, N: int) -> FourierSeries:
    """Coefficients ``e^{-ik phi} sin(pi beta) / (pi (beta - k))`` of ``u_{tau,beta}``."""
    beta = complex(beta)
    k = np.arange(-N, N + 1)
    if beta.imag == 0 and beta.real == round(beta.real):
        m = int(round(beta.real))
        vals = np.zeros(2 * N + 1, dtype=complex)
        if abs(m) <= N:
            vals[N + m] = (-1.0) ** m
    else:
        vals = np.sin(math.pi * beta) / (math.pi * (beta - k))
    return FourierSeries(_located(vals, phi, N))


def fourier_zero(phi: float, alpha: complex, N: int) -> FourierSeries:
    """Coefficients ``e^{-ik phi} (-1)^k Gamma(2a+1) / (Gamma(1+a+k) Gamma(1+a-k))`` of ``v_{tau,alpha}``.

    Gamma poles give exact zeros.
    """
    return fourier_fh(phi, alpha, 0.0, N)


# ---------------------------------------------------------------------------
# Smooth parts
# ---------------------------------------------------------------------------


def _parse_coeffs(m: Optional[Mapping]) -> Optional[dict]:
    if m is None:
        return None
    return {int(k): complex(v) for k, v in m.items()}


@dataclass(frozen=True, eq=False)
class SmoothSpec:
    """Smooth nonvanishing symbol given by a closed form.

    Exactly one of ``func`` (theta -> value), ``coefficients`` (finite
    trigonometric polynomial) or ``log_coefficients`` (``exp`` of one)
    is used. ``role`` is ``"c"`` or ``"d"``; ``d`` parts must satisfy
    ``d(theta) d(-theta) = 1`` and ``d(0) = d(pi) = 1``.
    """

    func: Optional[Callable] = None
    coefficients: Optional[Mapping[int, complex]] = None
    log_coefficients: Optional[Mapping[int, complex]] = None
    role: str = "c"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _parse_coeffs(self.coefficients))
        object.__setattr__(self, "log_coefficients", _parse_coeffs(self.log_coefficients))
        given = sum(x is not None for x in (self.func, self.coefficients, self.log_coefficients))
        if given != 1:
            raise ValidationError("SmoothSpec needs exactly one of func, coefficients, log_coefficients")
        if self.role not in ("c", "d"):
            raise ValidationError("role must be 'c' or 'd'")

    @classmethod
    def one(cls, role="c"):
        return cls(log_coefficients={}, role=role)

    @classmethod
    def from_log(cls, log_coefficients, role="c"):
        return cls(log_coefficients=log_coefficients, role=role)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(theta), dtype=complex) * np.ones_like(theta, dtype=complex)
        coeffs = self.coefficients if self.coefficients is not None else self.log_coefficients
        s = np.zeros(theta.shape, dtype=complex)
        for k, v in coeffs.items():
            s = s + v * np.exp(1j * k * theta)
        return s if self.coefficients is not None else np.exp(s)

    @property
    def is_one(self) -> bool:
        return self.log_coefficients is not None and all(v == 0 for v in self.log_coefficients.values())

    def times(self, other: "SmoothSpec", role="c") -> "SmoothSpec":
        if self.log_coefficients is not None and other.log_coefficients is not None:
            merged = dict(self.log_coefficients)
            for k, v in other.log_coefficients.items():
                merged[k] = merged.get(k, 0) + v
            return SmoothSpec(log_coefficients=merged, role=role)
        return SmoothSpec(func=lambda th, a=self, b=other: a(th) * b(th), role=role)

    def reciprocal(self) -> "SmoothSpec":
        if self.log_coefficients is not None:
            return SmoothSpec(log_coefficients={k: -v for k, v in self.log_coefficients.items()}, role=self.role)
        return SmoothSpec(func=lambda th, a=self: 1.0 / a(th), role=self.role)

    def scaled(self, lam: complex) -> "SmoothSpec":
        lam = complex(lam)
        if self.log_coefficients is not None and lam != 0 and lam.imag == 0 and lam.real > 0:
            merged = dict(self.log_coefficients)
            merged[0] = merged.get(0, 0) + math.log(lam.real)
            return SmoothSpec(log_coefficients=merged, role=self.role)
        return SmoothSpec(func=lambda th, a=self: lam * a(th), role=self.role)

    def validate(self, M: int = 4096) -> None:
        theta = TWO_PI * np.arange(M) / M
        vals = self(theta)
        if not np.all(np.isfinite(vals)):
            raise ValidationError("smooth symbol is not finite on the sample grid")
        if np.min(np.abs(vals)) <= 1e-10:
            raise DegenerateSymbolError("smooth symbol vanishes on the sample grid (min modulus <= 1e-10)")
        if self.role == "d":
            prod = vals * self(-theta)
            if np.max(np.abs(prod - 1.0)) > 1e-10:
                raise ValidationError("d-part violates d(theta) d(-theta) = 1")
            ends = self(np.array([0.0, math.pi]))
            if np.max(np.abs(ends - 1.0)) > 1e-10:
                raise ValidationError("d-part violates d(1) = d(-1) = 1")

    def to_dict(self) -> dict:
        if self.func is not None:
            raise ValidationError("a SmoothSpec given by a Python callable cannot be serialized")
        key = "coefficients" if self.coefficients is not None else "log_coefficients"
        data = getattr(self, key)
        return {key: {str(k): [v.real, v.imag] for k, v in sorted(data.items())}}

    @classmethod
    def from_dict(cls, data: Mapping, role="c") -> "SmoothSpec":
        unknown = set(data) - {"coefficients", "log_coefficients"}
        if unknown:
            raise ValidationError(f"unknown smooth-spec keys: {sorted(unknown)}")
        kw = {}
        for key in ("coefficients", "log_coefficients"):
            if key in data:
                kw[key] = {int(k): complex(v[0], v[1]) for k, v in data[key].items()}
        return cls(role=role, **kw)


def fourier_smooth(spec: SmoothSpec, N: int) -> FourierSeries:
    """Coefficients of a smooth symbol from ``M >= 8(2N+1)`` uniform samples."""
    if spec.coefficients is not None:
        return FourierSeries.from_mapping(N, spec.coefficients)
    if spec.is_one:
        return FourierSeries.delta(N)
    M = 1 << int(math.ceil(math.log2(8 * (2 * N + 1))))
    theta = TWO_PI * np.arange(M) / M
    vals = spec(theta)
    if not np.all(np.isfinite(vals)):
        raise ValidationError("smooth symbol produced non-finite samples")
    full = np.fft.fft(vals) / M
    k = np.arange(-N, N + 1)
    s = FourierSeries(full[k % M])
    peak = np.max(np.abs(s.coefficients))
    if N > 0 and s.tail_bound > 1e-10 * peak:
        s = FourierSeries(s.coefficients, reliable=False)
    return s


def convolve(f: FourierSeries, g: FourierSeries, N_out: int) -> FourierSeries:
    """Coefficients of the product symbol ``f g`` for ``|k| <= N_out``."""
    if len(f) * len(g) <= 1 << 20:
        full = np.convolve(f.coefficients, g.coefficients)
    else:
        full = fftconvolve(f.coefficients, g.coefficients)
    center = f.N + g.N
    lo, hi = center - N_out, center + N_out + 1
    out = np.zeros(2 * N_out + 1, dtype=complex)
    src_lo, src_hi = max(lo, 0), min(hi, len(full))
    out[src_lo - lo : src_hi - lo] = full[src_lo:src_hi]
    return FourierSeries(out, f.reliable and g.reliable)


# ---------------------------------------------------------------------------
# Problem data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FHFactor:
    """One singular factor: ``kind`` is ``"jump"`` (parameter beta) or ``"zero"`` (parameter alpha)."""

    kind: str
    angle: float
    parameter: complex

    def __post_init__(self):
        if self.kind not in ("jump", "zero"):
            raise ValidationError("kind must be 'jump' or 'zero'")
        object.__setattr__(self, "angle", float(_reduce_angle(self.angle)))
        object.__setattr__(self, "parameter", complex(self.parameter))

    def __call__(self, theta):
        if self.kind == "jump":
            return eval_jump(self.angle, self.parameter, theta)
        return eval_zero(self.angle, self.parameter, theta)

    def fourier(self, N: int) -> FourierSeries:
        if self.kind == "jump":
            return fourier_jump(self.angle, self.parameter, N)
        return fourier_zero(self.angle, self.parameter, N)


@dataclass(frozen=True)
class Singularity:
    """Interior pair ``tau_r, conj(tau_r)`` with ``0 < angle < pi``."""

    angle: float
    alpha_plus: complex
    alpha_minus: complex
    beta: complex = 0.0

    def __post_init__(self):
        for name in ("alpha_plus", "alpha_minus", "beta"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "angle", float(self.angle))

    @property
    def alpha(self) -> complex:
        return 0.5 * (self.alpha_plus + self.alpha_minus)

    @property
    def gamma(self) -> complex:
        return self.alpha + self.beta


CASE_BETAS = {1: (0, 0), 2: (-1, 1), 3: (0, 1), 4: (-1, 0)}
# phi_0 = u_{1,beta+} u_{-1,beta-} as (scale, power of t)
CASE_PHI0 = {1: (1.0, 0), 2: (-1.0, 0), 3: (1.0, 1), 4: (-1.0, -1)}

# (location angle, alpha, beta) triples for one symbol
Located = tuple


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """The pair ``(a, b)``: smooth parts, Fisher-Hartwig parameters and an optional case tag 1-4."""

    c: SmoothSpec = field(default_factory=SmoothSpec.one)
    d: SmoothSpec = field(default_factory=lambda: SmoothSpec.one("d"))
    alpha_plus: complex = 0.0
    alpha_minus: complex = 0.0
    beta_plus: complex = 0.0
    beta_minus: complex = 0.0
    pairs: Sequence[Singularity] = ()
    case: Optional[int] = None

    def __post_init__(self):
        for name in ("alpha_plus", "alpha_minus", "beta_plus", "beta_minus"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "pairs", tuple(self.pairs))
        if self.d.role != "d":
            object.__setattr__(self, "d", SmoothSpec(self.d.func, self.d.coefficients, self.d.log_coefficients, "d"))

    @classmethod
    def for_case(cls, case: int, alpha_plus=0.0, alpha_minus=0.0, pairs: Iterable = (), c=None, d=None):
        """Spec for one of the four solvable relations; ``pairs`` holds ``(angle, alpha_r)``."""
        if case not in CASE_BETAS:
            raise ValidationError("case tag must be 1, 2, 3 or 4")
        bp, bm = CASE_BETAS[case]
        sing = [p if isinstance(p, Singularity) else Singularity(p[0], p[1], p[1], 0.0) for p in pairs]
        return cls(
            c=c or SmoothSpec.one(),
            d=d or SmoothSpec.one("d"),
            alpha_plus=alpha_plus,
            alpha_minus=alpha_minus,
            beta_plus=bp,
            beta_minus=bm,
            pairs=sing,
            case=case,
        )

    @property
    def gamma_plus(self) -> complex:
        return self.alpha_plus + self.beta_plus

    @property
    def gamma_minus(self) -> complex:
        return self.alpha_minus + self.beta_minus

    def violations(self) -> list:
        msgs = []
        for name, v in (("alpha+", self.alpha_plus), ("alpha-", self.alpha_minus)):
            if not abs(v.real) < 0.5:
                msgs.append(f"|Re {name}| < 1/2 violated (Re {name} = {v.real:g})")
        for r, s in enumerate(self.pairs, 1):
            for name, v in (("alpha_r+", s.alpha_plus), ("alpha_r-", s.alpha_minus)):
                if not abs(v.real) < 0.5:
                    msgs.append(f"|Re {name}| < 1/2 violated for r={r} (Re = {v.real:g})")
            if not abs(s.gamma.real) < 0.5:
                msgs.append(f"|Re gamma_r| < 1/2 violated for r={r} (Re = {s.gamma.real:g})")
            if not 0.0 < s.angle < math.pi:
                msgs.append(f"tau_r must lie in the open upper half circle (r={r}, angle={s.angle:g})")
        if not -1.5 < self.gamma_plus.real < 0.5:
            msgs.append(f"-3/2 < Re gamma+ < 1/2 violated (Re gamma+ = {self.gamma_plus.real:g})")
        if not -0.5 < self.gamma_minus.real < 1.5:
            msgs.append(f"-1/2 < Re gamma- < 3/2 violated (Re gamma- = {self.gamma_minus.real:g})")
        angles = sorted(s.angle for s in self.pairs)
        if any(b - a <= ANGLE_SEPARATION for a, b in zip(angles, angles[1:])):
            msgs.append("interior singularities must be pairwise distinct")
        if self.case is not None:
            if self.case not in CASE_BETAS:
                msgs.append("case tag must be 1, 2, 3 or 4")
            else:
                bp, bm = CASE_BETAS[self.case]
                if self.beta_plus != bp or self.beta_minus != bm:
                    msgs.append(f"case {self.case} requires (beta+, beta-) = ({bp}, {bm})")
                for r, s in enumerate(self.pairs, 1):
                    if s.beta != 0 or s.alpha_plus != s.alpha_minus:
                        msgs.append(f"case {self.case} requires beta_r = 0 and alpha_r+ = alpha_r- (r={r})")
        return msgs

    def validate(self, smooth=True) -> "ProblemSpec":
        msgs = self.violations()
        if msgs:
            raise ValidationError("; ".join(msgs))
        if smooth:
            self.c.validate()
            self.d.validate()
        return self

    # located factor lists -------------------------------------------------
    def a_factors(self) -> list:
        out = [(0.0, self.alpha_plus, 0.0), (math.pi, self.alpha_minus, 0.0)]
        for s in self.pairs:
            out += [(s.angle, s.alpha_plus, 0.0), (-s.angle, s.alpha_minus, 0.0)]
        return out

    def b_factors(self) -> list:
        out = [(0.0, self.alpha_plus, self.beta_plus), (math.pi, self.alpha_minus, self.beta_minus)]
        for s in self.pairs:
            out += [(s.angle, s.alpha, s.beta), (-s.angle, s.alpha, s.beta)]
        return out

    def psi_factors(self, sign: float = 1.0) -> list:
        """Jumps of ``psi`` (``sign=-1`` gives ``psi^{-1}``)."""
        out = [(0.0, 0.0, sign * self.alpha_plus), (math.pi, 0.0, sign * self.alpha_minus)]
        for s in self.pairs:
            out += [(s.angle, 0.0, sign * s.alpha_plus), (-s.angle, 0.0, sign * s.alpha_minus)]
        return out

    def phi_factors(self) -> list:
        out = [(0.0, 0.0, self.gamma_plus), (math.pi, 0.0, self.gamma_minus)]
        for s in self.pairs:
            out += [(s.angle, 0.0, s.gamma), (-s.angle, 0.0, s.gamma)]
        return out

    def stripped(self) -> "ProblemSpec":
        """Same singular data with ``c = d = 1``."""
        return ProblemSpec(
            alpha_plus=self.alpha_plus,
            alpha_minus=self.alpha_minus,
            beta_plus=self.beta_plus,
            beta_minus=self.beta_minus,
            pairs=self.pairs,
            case=self.case,
        )

    # pointwise -------------------------------------------------------------
    def eval_a(self, theta):
        return self.c(theta) * _eval_located(self.a_factors(), theta)

    def eval_b(self, theta):
        return self.c(theta) * self.d(theta) * _eval_located(self.b_factors(), theta)

    # serialization ------------------------------------------------------------
    def to_dict(self) -> dict:
        cx = lambda z: [complex(z).real, complex(z).imag]
        return {
            "c": self.c.to_dict(),
            "d": self.d.to_dict(),
            "alpha_plus": cx(self.alpha_plus),
            "alpha_minus": cx(self.alpha_minus),
            "beta_plus": cx(self.beta_plus),
            "beta_minus": cx(self.beta_minus),
            "pairs": [
                {"angle": s.angle, "alpha_plus": cx(s.alpha_plus), "alpha_minus": cx(s.alpha_minus), "beta": cx(s.beta)}
                for s in self.pairs
            ],
            "case": self.case,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ProblemSpec":
        allowed = {"c", "d", "alpha_plus", "alpha_minus", "beta_plus", "beta_minus", "pairs", "case"}
        unknown = set(data) - allowed
        if unknown:
            raise ValidationError(f"unknown spec keys: {sorted(unknown)}")
        cx = lambda v: complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
        case = data.get("case")
        pairs = []
        for p in data.get("pairs", []):
            bad = set(p) - {"angle", "alpha_plus", "alpha_minus", "alpha", "beta"}
            if bad:
                raise ValidationError(f"unknown pair keys: {sorted(bad)}")
            ap = p.get("alpha_plus", p.get("alpha", 0.0))
            am = p.get("alpha_minus", p.get("alpha", 0.0))
            pairs.append(Singularity(float(p["angle"]), cx(ap), cx(am), cx(p.get("beta", 0.0))))
        kw = dict(
            c=SmoothSpec.from_dict(data["c"]) if "c" in data else SmoothSpec.one(),
            d=SmoothSpec.from_dict(data["d"], role="d") if "d" in data else SmoothSpec.one("d"),
            alpha_plus=cx(data.get("alpha_plus", 0.0)),
            alpha_minus=cx(data.get("alpha_minus", 0.0)),
            pairs=pairs,
            case=case,
        )
        if case is not None and case in CASE_BETAS and "beta_plus" not in data and "beta_minus" not in data:
            kw["beta_plus"], kw["beta_minus"] = CASE_BETAS[case]
        else:
            kw["beta_plus"] = cx(data.get("beta_plus", 0.0))
            kw["beta_minus"] = cx(data.get("beta_minus", 0.0))
        return cls(**kw)


def _eval_located(factors, theta):
    out = np.ones(np.shape(theta), dtype=complex)
    for phi, alpha, beta in factors:
        if alpha == 0 and beta == 0:
            continue
        out = out * eval_fh(phi, alpha, beta, theta)
    return out


def default_work_size(N: int) -> int:
    return max(4 * N, N + 1024)


def located_product(factors, N: int, smooth: Optional[SmoothSpec] = None, N_work: Optional[int] = None) -> FourierSeries:
    """Fourier series of ``smooth * prod v_{tau,alpha} u_{tau,beta}`` truncated to ``[-N, N]``.

    Factors sharing a location are merged into one closed form; products
    across distinct locations are formed by convolution at the larger size
    ``N_work`` before truncation.
    """
    N_work = N_work or default_work_size(N)
    merged = []
    for phi, alpha, beta in factors:
        phi = float(_reduce_angle(phi))
        for entry in merged:
            if abs(entry[0] - phi) < ANGLE_SEPARATION:
                entry[1] += complex(alpha)
                entry[2] += complex(beta)
                break
        else:
            merged.append([phi, complex(alpha), complex(beta)])
    series = []
    for phi, alpha, beta in sorted(merged, key=lambda e: e[0]):
        if alpha == 0 and beta == 0:
            continue
        if alpha == 0:
            series.append(fourier_jump(phi, beta, N_work))
        else:
            series.append(fourier_fh(phi, alpha, beta, N_work))
    if smooth is not None and not smooth.is_one:
        series.insert(0, fourier_smooth(smooth, N_work))
    if not series:
        return FourierSeries.delta(N)
    out = series[0]
    for s in series[1:]:
        out = convolve(out, s, N_work)
    return out.truncate(N)


def assemble_pair(spec: ProblemSpec, N: int, N_work: Optional[int] = None):
    """Fourier series ``(a, b)`` of the Toeplitz and Hankel symbols for ``spec``."""
    spec.validate()
    if spec.case is None:
        a = located_product(spec.a_factors(), N, spec.c, N_work)
        b = located_product(spec.b_factors(), N, spec.c.times(spec.d), N_work)
        return a, b
    # b = phi_0 d a exactly, so both series share the same truncation error
    N_work = N_work or default_work_size(N + 1)
    a_ext = located_product(spec.a_factors(), N + 1, spec.c, N_work)
    da = a_ext if spec.d.is_one else located_product(spec.a_factors(), N + 1, spec.c.times(spec.d), N_work)
    scale, power = CASE_PHI0[spec.case]
    return a_ext.truncate(N), (da * scale).shift(power).truncate(N)
