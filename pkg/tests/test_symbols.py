import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from oracles import fh_coefficients_quadrature

from fhdet.errors import SeriesRangeError, SingularPointError, ValidationError
from fhdet.symbols import (
    FourierSeries,
    ProblemSpec,
    Singularity,
    SmoothSpec,
    assemble_pair,
    convolve,
    eval_eta,
    eval_fh,
    eval_jump,
    eval_xi,
    eval_zero,
    fourier_fh,
    fourier_jump,
    fourier_smooth,
    fourier_zero,
)


def quad_coefficient(f, k, breakpoint=0.0):
    """(1/2pi) int_0^{2pi} f(theta) e^{-ik theta} d theta, split at the singular point."""
    lo = breakpoint
    hi = breakpoint + 2 * math.pi
    re = integrate.quad(lambda t: (f(t) * np.exp(-1j * k * t)).real, lo, hi, limit=400, epsabs=1e-13)[0]
    im = integrate.quad(lambda t: (f(t) * np.exp(-1j * k * t)).imag, lo, hi, limit=400, epsabs=1e-13)[0]
    return (re + 1j * im) / (2 * math.pi)


class TestPointwise:
    def test_jump_values(self):
        assert eval_jump(0.0, 0.0, 1.0) == pytest.approx(1.0)
        th = np.array([0.3, 2.0, 5.9])
        np.testing.assert_allclose(eval_jump(0.0, 1.0, th), np.exp(1j * (th - math.pi)))
        assert eval_jump(math.pi / 2, 0.3j, math.pi) == pytest.approx(math.exp(0.3 * math.pi / 2))

    def test_jump_at_point_raises(self):
        with pytest.raises(SingularPointError):
            eval_jump(1.0, 0.5, 1.0 + 2 * math.pi)

    def test_zero_values(self):
        assert eval_zero(0.0, 0.0, 0.7) == pytest.approx(1.0)
        assert eval_zero(0.0, 1.0, math.pi) == pytest.approx(4.0)
        assert eval_zero(0.0, 0.5, math.pi / 2) == pytest.approx(math.sqrt(2))

    def test_zero_at_point(self):
        assert eval_zero(0.0, 0.5, 0.0) == 0
        with pytest.raises(SingularPointError):
            eval_zero(0.0, -0.2, 0.0)

    def test_eta_xi(self):
        assert eval_eta(0.0, 0.0, np.exp(0.4j)) == pytest.approx(1.0)
        assert eval_eta(0.0, 1.0, -1.0) == pytest.approx(2.0)
        assert eval_xi(0.0, 1.0, -1.0) == pytest.approx(2.0)

    @pytest.mark.parametrize("phi", [0.0, 1.1, math.pi])
    @pytest.mark.parametrize("beta", [0.3, -0.2 + 0.4j])
    def test_wiener_hopf_of_jump(self, phi, beta):
        th = phi + 2.0
        t = np.exp(1j * th)
        lhs = eval_xi(phi, -beta, t) * eval_eta(phi, beta, t)
        assert abs(lhs - eval_jump(phi, beta, th)) < 1e-12

    def test_wiener_hopf_of_zero(self):
        th, alpha = 2.3, 0.35 - 0.1j
        t = np.exp(1j * th)
        assert abs(eval_xi(0.0, alpha, t) * eval_eta(0.0, alpha, t) - eval_zero(0.0, alpha, th)) < 1e-12


class TestCoefficients:
    def test_jump_examples(self):
        np.testing.assert_allclose(fourier_jump(0.0, 0.0, 5).coefficients, FourierSeries.delta(5).coefficients)
        assert fourier_jump(0.0, 0.5, 4)[0] == pytest.approx(2 / math.pi)
        a = fourier_jump(math.pi / 2, 0.25, 6)[3]
        b = fourier_jump(0.0, 0.25, 6)[3]
        assert a == pytest.approx(np.exp(-3j * math.pi / 2) * b)

    def test_integer_jump_is_monomial(self):
        s = fourier_jump(0.0, 1.0, 4)
        assert s[1] == -1 and np.count_nonzero(s.coefficients) == 1
        assert fourier_jump(math.pi, -1.0, 3)[-1] == pytest.approx(-(-1.0))

    def test_zero_examples(self):
        np.testing.assert_allclose(fourier_zero(0.0, 0.0, 3).coefficients, FourierSeries.delta(3).coefficients)
        s = fourier_zero(0.0, 1.0, 4)
        np.testing.assert_allclose(s.coefficients, [0, 0, 0, -1, 2, -1, 0, 0, 0], atol=1e-15)
        assert fourier_zero(0.0, 0.5, 2)[0] == pytest.approx(4 / math.pi)

    def test_zero_rejects_strong_pole(self):
        with pytest.raises(ValidationError):
            fourier_zero(0.0, -0.5, 4)

    @pytest.mark.parametrize(
        "phi,alpha,beta",
        [(0.0, 0.25, 0.0), (math.pi, -0.3, 0.0), (1.3, 0.0, 0.4 + 0.2j), (2.0, 0.2 - 0.3j, -0.35 + 0.1j), (0.0, 0.1j, 0.45)],
    )
    def test_against_quadrature(self, phi, alpha, beta):
        s = fourier_fh(phi, alpha, beta, 64)
        np.testing.assert_allclose(s.coefficients, fh_coefficients_quadrature(phi, alpha, beta, 64), rtol=0, atol=1e-10)

    def test_scipy_quad_spot_check(self):
        s = fourier_fh(1.3, 0.25, 0.3, 8)
        f = lambda t: eval_fh(1.3, 0.25, 0.3, t)
        for k in (-3, 0, 5):
            assert abs(s[k] - quad_coefficient(f, k, 1.3)) < 1e-8

    @settings(max_examples=25, deadline=None)
    @given(
        st.floats(0, 2 * math.pi),
        st.floats(-0.45, 0.45),
        st.floats(-0.5, 0.5),
        st.floats(-0.45, 0.45),
        st.floats(-0.5, 0.5),
    )
    def test_quadrature_property(self, phi, ar, ai, br, bi):
        alpha, beta = complex(ar, ai), complex(br, bi)
        s = fourier_fh(phi, alpha, beta, 64)
        np.testing.assert_allclose(s.coefficients, fh_coefficients_quadrature(phi, alpha, beta, 64), rtol=0, atol=1e-10)

    def test_large_index_finite(self):
        s = fourier_fh(0.7, 0.45, 0.49, 20000)
        assert np.all(np.isfinite(s.coefficients))

    def test_real_alpha_gives_real_even(self):
        s = fourier_zero(0.0, 0.3, 40)
        np.testing.assert_allclose(s.coefficients.imag, 0, atol=1e-15)
        np.testing.assert_allclose(s.coefficients, s.coefficients[::-1], rtol=1e-14)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0, 2 * math.pi), st.floats(-0.45, 0.45), st.floats(-0.5, 0.5))
    def test_jump_phase_independence(self, phi, br, bi):
        beta = complex(br, bi)
        k = np.arange(-20, 21)
        a = fourier_jump(phi, beta, 20).coefficients * np.exp(1j * k * phi)
        b = fourier_jump(0.0, beta, 20).coefficients
        np.testing.assert_allclose(a, b, atol=1e-13)


class TestSeries:
    def test_indexing_range(self):
        s = FourierSeries.delta(3)
        with pytest.raises(SeriesRangeError):
            s[4]
        assert s.get(7) == 0

    def test_tail_bound(self):
        c = np.zeros(21)
        c[0] = 0.5
        s = FourierSeries(c)
        assert s.tail_bound == 0.5
        assert (s * 2).tail_bound == 1.0

    def test_flip(self):
        s = FourierSeries.from_mapping(2, {1: 3.0, -2: 1j})
        assert s.flip()[-1] == 3.0 and s.flip()[2] == 1j

    def test_convolve_examples(self):
        g = fourier_jump(0.4, 0.3, 10)
        np.testing.assert_allclose(convolve(FourierSeries.delta(0), g, 10).coefficients, g.coefficients)
        v = fourier_zero(0.0, 1.0, 3)
        sq = convolve(v, v, 3)
        np.testing.assert_allclose(sq.coefficients, [0, 1, -4, 6, -4, 1, 0], atol=1e-14)

    def test_jump_times_inverse(self):
        beta = 0.3 + 0.1j
        prod = convolve(fourier_jump(0.0, beta, 4000), fourier_jump(0.0, -beta, 4000), 5)
        np.testing.assert_allclose(prod.coefficients, FourierSeries.delta(5).coefficients, atol=1e-3)

    def test_evaluate_and_grid(self):
        s = FourierSeries.from_mapping(2, {1: 1.0, -1: 1.0})
        assert s.evaluate(0.0)[0] == pytest.approx(2.0)
        np.testing.assert_allclose(s.on_grid(8), 2 * np.cos(2 * np.pi * np.arange(8) / 8), atol=1e-15)


class TestSmooth:
    def test_constant(self):
        np.testing.assert_allclose(fourier_smooth(SmoothSpec.one(), 4).coefficients, FourierSeries.delta(4).coefficients)

    def test_exponential(self):
        s = fourier_smooth(SmoothSpec(func=lambda th: np.exp(0.3 * np.exp(1j * th))), 12)
        want = [0.3**k / math.factorial(k) for k in range(13)]
        np.testing.assert_allclose(s.coefficients[12:], want, atol=1e-15)
        np.testing.assert_allclose(s.coefficients[:12], 0, atol=1e-15)
        assert s.reliable

    def test_d_part(self):
        d = SmoothSpec.from_log({1: 0.2, -1: -0.2}, role="d")
        d.validate()
        th = np.linspace(0, 6, 11)
        np.testing.assert_allclose(d(th) * d(-th), 1.0, atol=1e-14)
        s = fourier_smooth(d, 30)
        np.testing.assert_allclose(s.evaluate(th), d(th), atol=1e-13)

    def test_bad_d_part(self):
        with pytest.raises(ValidationError):
            SmoothSpec.from_log({1: 0.2, -1: 0.2}, role="d").validate()

    def test_unresolved_flagged(self):
        s = fourier_smooth(SmoothSpec(func=lambda th: 1.0 / (1.01 - np.cos(th))), 8)
        assert not s.reliable

    def test_nonfinite_rejected(self):
        with pytest.raises(ValidationError):
            fourier_smooth(SmoothSpec(func=lambda th: np.full_like(th, np.nan)), 4)

    def test_round_trip(self):
        c = SmoothSpec.from_log({1: 0.3 + 0.1j, -2: 0.05})
        assert SmoothSpec.from_dict(c.to_dict()).to_dict() == c.to_dict()


class TestProblemSpec:
    def test_trivial_pair(self):
        a, b = assemble_pair(ProblemSpec(), 5)
        np.testing.assert_array_equal(a.coefficients, FourierSeries.delta(5).coefficients)
        np.testing.assert_array_equal(b.coefficients, FourierSeries.delta(5).coefficients)

    def test_case3_trivial(self):
        a, b = assemble_pair(ProblemSpec.for_case(3), 5)
        np.testing.assert_allclose(a.coefficients, FourierSeries.delta(5).coefficients, atol=1e-15)
        np.testing.assert_allclose(b.coefficients, FourierSeries.delta(5).shift(1).coefficients, atol=1e-15)

    def test_case1_quarter(self):
        a, b = assemble_pair(ProblemSpec.for_case(1, 0.25, 0.25), 20)
        f = lambda t: eval_zero(0.0, 0.25, t) * eval_zero(math.pi, 0.25, t)
        for k in (0, 1, 2, 7, 20):
            assert abs(a[k] - quad_coefficient(f, k)) < 1e-6
        np.testing.assert_allclose(a.coefficients, b.coefficients, atol=1e-15)

    @pytest.mark.parametrize("case,scale,power", [(1, 1, 0), (2, -1, 0), (3, 1, 1), (4, -1, -1)])
    def test_case_relations(self, case, scale, power):
        c = SmoothSpec.from_log({1: 0.3, -1: 0.3})
        spec = ProblemSpec.for_case(case, 0.2, -0.15, pairs=[(1.0, 0.1)], c=c)
        a, b = assemble_pair(spec, 60)
        want = (a * scale).shift(power)
        np.testing.assert_allclose(b.coefficients[5:-5], want.coefficients[5:-5], atol=1e-10)

    def test_pointwise_agreement(self):
        c = SmoothSpec.from_log({1: 0.3, -1: 0.1})
        d = SmoothSpec.from_log({1: 0.2, -1: -0.2}, role="d")
        spec = ProblemSpec(c=c, d=d, alpha_plus=0.3, alpha_minus=0.2, beta_plus=0.1, beta_minus=0.2,
                           pairs=[Singularity(1.2, 0.3, 0.25, 0.1)])
        N = 2048
        a, b = assemble_pair(spec, N)
        th = np.array([0.5, 1.7, 2.9, 4.0])
        # partial sums of symbols with positive Re alpha converge pointwise at regular points
        assert np.max(np.abs(a.evaluate(th) - spec.eval_a(th))) < 1e-3
        assert np.max(np.abs(b.evaluate(th) - spec.eval_b(th))) < 1e-2

    def test_violations_named(self):
        with pytest.raises(ValidationError, match=r"\|Re alpha\+\| < 1/2"):
            ProblemSpec.for_case(1, 0.6, 0.0).validate()
        with pytest.raises(ValidationError, match="gamma"):
            ProblemSpec(alpha_minus=0.3, beta_minus=-0.9).validate()
        with pytest.raises(ValidationError, match="upper half"):
            ProblemSpec(pairs=[Singularity(4.0, 0.1, 0.1)]).validate()

    def test_case_tag_forces_betas(self):
        spec = ProblemSpec(beta_plus=0.0, beta_minus=0.5, case=1)
        assert any("case 1" in m for m in spec.violations())

    def test_round_trip(self):
        c = SmoothSpec.from_log({1: 0.3, -1: 0.3})
        spec = ProblemSpec.for_case(2, 0.1 + 0.2j, -0.3, pairs=[(0.8, 0.2)], c=c)
        again = ProblemSpec.from_dict(spec.to_dict())
        assert again.to_dict() == spec.to_dict()

    def test_unknown_key(self):
        with pytest.raises(ValidationError):
            ProblemSpec.from_dict({"alpha": [0, 0]})
