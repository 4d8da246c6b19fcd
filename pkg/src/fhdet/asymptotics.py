"""Closed-form large-n predictions ``G^n n^p E`` for the four reducible cases."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .constants import constant_E, log_barnes_g, smooth_parts
from .errors import UnsupportedPredictionError, ValidationError
from .factorization import Factorization, PlusFactor
from .structured import LogDet
from .symbols import CASE_BETAS, ProblemSpec


@dataclass(frozen=True)
class CaseTerms:
    """Per-case data shared by every case formula.

    ``x, y`` are the Barnes-G base points at ``+1`` and ``-1`` (they also fix
    the n-exponent and the interior exponents), ``two_shift`` and ``delta``
    enter the power of two, and ``c_plus``/``d_plus`` hold the exponent offsets
    of the smooth factors at ``+1`` and ``-1``.
    """

    x: float
    y: float
    two_shift: float
    delta: float
    c_plus: tuple
    d_plus: tuple


TERM_TABLE = {
    1: CaseTerms(0.5, 1.5, 0.0, 0.0, (0.5, -0.5), (0.5, -0.5)),
    2: CaseTerms(1.5, 0.5, 0.0, 0.0, (-0.5, 0.5), (-0.5, 0.5)),
    3: CaseTerms(0.5, 0.5, 2.0, -1.0, (0.5, 0.5), (0.5, 0.5)),
    4: CaseTerms(1.5, 1.5, 0.0, 1.0, (-0.5, -0.5), (-0.5, -0.5)),
}


@dataclass
class AsymptoticPrediction:
    G: complex
    p: complex
    E: complex
    case: int
    log_E: Optional[complex] = None
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.log_E is None:
            self.log_E = cmath.log(self.E)

    def log_value(self, n: int) -> complex:
        return n * cmath.log(self.G) + self.p * math.log(n) + self.log_E

    def __call__(self, n: int) -> complex:
        return cmath.exp(self.log_value(n))


def _pairs(pairs: Iterable):
    out = []
    for p in pairs:
        if hasattr(p, "angle"):
            if p.alpha_plus != p.alpha_minus or p.beta != 0:
                raise UnsupportedPredictionError("no known prediction for unequal alpha_r^+- or nonzero beta_r")
            out.append((float(p.angle), complex(p.alpha_plus)))
        else:
            out.append((float(p[0]), complex(p[1])))
    return out


def _check(case, ap, am, pairs):
    if case not in TERM_TABLE:
        raise ValidationError("case tag must be 1, 2, 3 or 4")
    msgs = []
    if not abs(ap.real) < 0.5 or not abs(am.real) < 0.5:
        msgs.append("|Re alpha+-| < 1/2 required")
    for phi, a in pairs:
        if not abs(a.real) < 0.5:
            msgs.append(f"|Re alpha_r| < 1/2 required (got {a.real:g})")
        if not 0.0 < phi < math.pi:
            msgs.append(f"tau_r must lie in the open upper half circle (angle {phi:g})")
    angles = sorted(phi for phi, _ in pairs)
    if any(b - a <= 1e-9 for a, b in zip(angles, angles[1:])):
        msgs.append("interior singularities must be distinct")
    if msgs:
        raise ValidationError("; ".join(msgs))


def pure_log_terms(case: int, alpha_plus, alpha_minus, pairs=()) -> tuple:
    """``(p, log E)`` for ``c = d = 1``."""
    ap, am = complex(alpha_plus), complex(alpha_minus)
    pairs = _pairs(pairs)
    _check(case, ap, am, pairs)
    T = TERM_TABLE[case]
    x, y = T.x, T.y
    sum_sq = sum(a * a for _, a in pairs)

    p = 0.5 * (ap**2 + am**2 + 2 * (x - 1) * ap + 2 * (y - 1) * am) + sum_sq

    s = ap + am + T.delta
    log_E = (T.two_shift - 0.5 * s * s + 0.5 * s + sum_sq) * math.log(2.0)

    for phi, a in pairs:
        tau = cmath.exp(1j * phi)
        log_E += -a * a * math.log(abs(1 - tau * tau))
        log_E += -2 * a * (ap + x - 1) * math.log(abs(1 - tau))
        log_E += -2 * a * (am + y - 1) * math.log(abs(1 + tau))
    for k in range(len(pairs)):
        for j in range(k):
            tk, tj = cmath.exp(1j * pairs[k][0]), cmath.exp(1j * pairs[j][0])
            w = -2 * pairs[k][1] * pairs[j][1]
            log_E += w * (math.log(abs(tk - tj)) + math.log(abs(tk - 1 / tj)))

    log_E += 0.5 * (ap + am) * math.log(math.pi)
    log_E += log_barnes_g(x) + log_barnes_g(y) - log_barnes_g(x + ap) - log_barnes_g(y + am)
    for _, a in pairs:
        log_E += 2 * log_barnes_g(1 + a) - log_barnes_g(1 + 2 * a)
    return complex(p), complex(log_E)


def pure_prediction(case: int, alpha_plus=0.0, alpha_minus=0.0, pairs=()) -> AsymptoticPrediction:
    """Prediction for ``det M_n(a_0, b_0)`` with pure Fisher-Hartwig symbols.

    ``pairs`` lists ``(angle, alpha_r)`` with ``0 < angle < pi``.
    """
    p, log_E = pure_log_terms(case, alpha_plus, alpha_minus, pairs)
    return AsymptoticPrediction(1.0 + 0j, p, cmath.exp(log_E), case, log_E)


def full_prediction(
    spec: ProblemSpec,
    fact_c: Optional[Factorization] = None,
    d_plus: Optional[PlusFactor] = None,
    N_smooth: int = 256,
) -> AsymptoticPrediction:
    """Prediction for ``det M_n(a, b)`` including the smooth parts ``c`` and ``d``."""
    case = spec.case
    if case is None:
        raise UnsupportedPredictionError("no known prediction: the problem carries no case tag 1-4")
    if (spec.beta_plus, spec.beta_minus) != tuple(complex(b) for b in CASE_BETAS[case]):
        raise UnsupportedPredictionError(f"no known prediction: (beta+, beta-) does not match case {case}")
    for s in spec.pairs:
        if s.alpha_plus != s.alpha_minus or s.beta != 0:
            raise UnsupportedPredictionError("no known prediction for unequal alpha_r^+- or nonzero beta_r")
    spec.validate()
    p, log_pure = pure_log_terms(case, spec.alpha_plus, spec.alpha_minus, spec.pairs)
    if fact_c is None or d_plus is None:
        fc, dp = smooth_parts(spec, N_smooth)
        fact_c = fact_c or fc
        d_plus = d_plus or dp
    bundle = constant_E(spec, fact_c, d_plus)
    log_smooth = cmath.log(bundle.E_hat1) + cmath.log(bundle.half_power_ratio) + cmath.log(bundle.exp_sum)
    log_E = log_pure + log_smooth
    return AsymptoticPrediction(fact_c.G, p, cmath.exp(log_E), case, log_E, list(bundle.notes))


def predict_value(pred: AsymptoticPrediction, n: int) -> LogDet:
    """``n log G + p log n + log E`` as a :class:`LogDet`."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    return LogDet.from_log(pred.log_value(n))


def term_table_rows() -> list:
    """Flattened term table for audit output."""
    rows = []
    for case, T in TERM_TABLE.items():
        bp, bm = CASE_BETAS[case]
        rows.append(
            {
                "case": case,
                "beta_plus": bp,
                "beta_minus": bm,
                "n_exponent": f"((a+)^2 + (a-)^2 + {2 * (T.x - 1):+g} a+ {2 * (T.y - 1):+g} a-)/2 + sum a_r^2",
                "two_exponent": f"{T.two_shift:g} - (a+ + a- {T.delta:+g})^2/2 + (a+ + a- {T.delta:+g})/2 + sum a_r^2",
                "barnes_points": f"G({T.x:g})G({T.y:g})/(G({T.x:g}+a+)G({T.y:g}+a-))",
                "c_plus_exponents": T.c_plus,
                "d_plus_exponents": f"(a+ {T.d_plus[0]:+g}, a- {T.d_plus[1]:+g})",
            }
        )
    return rows
