import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fhdet.errors import ConditioningError, SeriesRangeError
from fhdet.structured import (
    LogDet,
    compose_reduction_rhs,
    condition_estimate,
    hankel,
    log_det,
    th_matrix,
    toeplitz,
    truncated_inverse,
)
from fhdet.symbols import FourierSeries, ProblemSpec, Singularity, SmoothSpec, assemble_pair, fourier_jump, fourier_smooth, fourier_zero


def cofactor_det(M):
    """Leibniz expansion; fine for n <= 6."""
    n = M.shape[0]
    total = 0j
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = (-1) ** inversions
        for i, j in enumerate(perm):
            term = term * M[i, j]
        total += term
    return total


def random_series(rng, N):
    return FourierSeries(rng.normal(size=2 * N + 1) + 1j * rng.normal(size=2 * N + 1))


class TestBuilders:
    def test_toeplitz_delta(self):
        np.testing.assert_array_equal(toeplitz(FourierSeries.delta(4), 3), np.eye(3))

    def test_toeplitz_zero_factor(self):
        np.testing.assert_allclose(toeplitz(fourier_zero(0.0, 1.0, 4), 2), [[2, -1], [-1, 2]], atol=1e-14)

    def test_toeplitz_index_map(self):
        f = random_series(np.random.default_rng(1), 8)
        assert toeplitz(f, 8)[5, 2] == f[3]
        assert toeplitz(f, 8)[2, 5] == f[-3]

    def test_hankel_examples(self):
        assert not np.any(hankel(FourierSeries.delta(6), 3))
        H = hankel(FourierSeries.from_mapping(4, {1: 1.0}), 2)
        np.testing.assert_array_equal(H, [[1, 0], [0, 0]])
        np.testing.assert_allclose(hankel(fourier_zero(0.0, 1.0, 4), 2), [[-1, 0], [0, 0]], atol=1e-14)

    def test_range_errors(self):
        f = FourierSeries.delta(3)
        with pytest.raises(SeriesRangeError):
            toeplitz(f, 5)
        with pytest.raises(SeriesRangeError):
            hankel(f, 3)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**31))
    def test_index_maps(self, n, seed):
        rng = np.random.default_rng(seed)
        f = random_series(rng, 2 * n)
        T, H = toeplitz(f, n), hankel(f, n)
        j, k = rng.integers(0, n, size=2)
        assert T[j, k] == f[j - k]
        assert H[j, k] == f[j + k + 1]

    def test_th_examples(self):
        delta = FourierSeries.delta(8)
        np.testing.assert_array_equal(th_matrix(delta, delta, 4), np.eye(4))
        z = fourier_zero(0.0, 1.0, 8)
        np.testing.assert_allclose(th_matrix(z, z, 2), [[1, -1], [-1, 2]], atol=1e-14)

    def test_case3_trivial_matrix(self):
        a, b = assemble_pair(ProblemSpec.for_case(3), 16)
        expected = np.eye(5)
        expected[0, 0] = 2
        np.testing.assert_allclose(th_matrix(a, b, 5), expected, atol=1e-14)


class TestLogDet:
    def test_examples(self):
        assert log_det(np.eye(4)) == LogDet(0.0, 0.0)
        d = log_det(np.array([[1, -1], [-1, 2]]))
        assert d.log_modulus == pytest.approx(0.0, abs=1e-15) and d.phase == pytest.approx(0.0, abs=1e-15)
        d = log_det(np.diag([2.0, 2.0, 2.0]))
        assert d.log_modulus == pytest.approx(3 * math.log(2)) and d.phase == 0.0

    def test_singular(self):
        assert log_det(np.array([[1, 2], [2, 4]])).log_modulus == -math.inf
        assert log_det(np.zeros((3, 3))).value == 0

    def test_permutation_sign(self):
        d = log_det(np.array([[0, 1], [1, 0]]))
        assert d.value == pytest.approx(-1.0)

    def test_phase_range(self):
        d = LogDet.from_log(complex(0.0, 3 * math.pi))
        assert d.phase == pytest.approx(math.pi)
        assert LogDet.from_log(complex(0.0, -math.pi)).phase == math.pi

    def test_large_growth_no_overflow(self):
        d = log_det(1e3 * np.eye(400))
        assert d.log_modulus == pytest.approx(400 * math.log(1e3))

    @pytest.mark.parametrize("n", range(1, 7))
    def test_against_cofactor_expansion(self, n):
        rng = np.random.default_rng(100 + n)
        M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        assert log_det(M).value == pytest.approx(cofactor_det(M), rel=1e-10)


class TestInverse:
    def test_delta(self):
        np.testing.assert_allclose(truncated_inverse(FourierSeries.delta(8), 8), np.eye(8), atol=1e-15)

    def test_neumann_series(self):
        psi = FourierSeries.from_mapping(16, {0: 1.0, 1: 0.5})
        inv = truncated_inverse(psi, 16)
        # (I + 0.5 S)^{-1} = sum (-0.5 S)^k with S the down-shift
        expected = toeplitz(FourierSeries.from_mapping(16, {k: (-0.5) ** k for k in range(16)}), 16)
        np.testing.assert_allclose(inv, expected, atol=1e-14)

    def test_jump_symbol_convergence(self):
        firsts = [truncated_inverse(fourier_jump(0.0, 0.2j, N), N)[0, 0] for N in (512, 1024)]
        assert abs(firsts[0] - firsts[1]) < 1e-6

    @pytest.mark.parametrize("N", [128, 512, 1024])
    def test_jump_symbol_leading_entry_rate(self, N):
        # the entry is D_{N-1}/D_N with D_N ~ N^{-beta^2}, so it sits at 1 + beta^2/N
        beta = 0.2j
        entry = truncated_inverse(fourier_jump(0.0, beta, N), N)[0, 0]
        assert abs(entry - (1 + beta**2 / N)) < 2.0 / N**2

    def test_ill_conditioned(self):
        psi = FourierSeries.from_mapping(64, {0: 1.0, 1: 3.0})
        with pytest.raises(ConditioningError) as info:
            truncated_inverse(psi, 64)
        assert info.value.estimate > 1e12
        assert condition_estimate(toeplitz(psi, 64)) > 1e12


class TestComposition:
    def test_all_zero_identity(self):
        R = compose_reduction_rhs(ProblemSpec(), 4, N=64)
        np.testing.assert_allclose(R, np.eye(4), atol=1e-14)

    def test_smooth_only_collapse(self):
        c = SmoothSpec.from_log({1: 0.3, -1: 0.3})
        d = SmoothSpec.from_log({1: 0.2, -1: -0.2}, role="d")
        spec = ProblemSpec(c=c, d=d)
        N = 64
        R = compose_reduction_rhs(spec, 5, N=N)
        direct = th_matrix(fourier_smooth(c, N), fourier_smooth(c.times(d), 2 * N), N)[:5, :5]
        np.testing.assert_allclose(R, direct, atol=1e-13)

    def test_imaginary_parameters(self):
        c = SmoothSpec.from_log({1: 0.3, -1: 0.3})
        d = SmoothSpec.from_log({1: 0.2, -1: -0.2}, role="d")
        spec = ProblemSpec(c=c, d=d, alpha_plus=0.2j, alpha_minus=-0.1j, pairs=[Singularity(math.pi / 2, 0.15j, 0.15j, 0.1j)])
        a, b = assemble_pair(spec, 12, 1 << 15)
        lhs = log_det(th_matrix(a, b, 6)).value
        gaps = [abs(log_det(compose_reduction_rhs(spec, 6, N)).value - lhs) / abs(lhs) for N in (256, 512)]
        assert gaps[1] < gaps[0] < 1e-2
