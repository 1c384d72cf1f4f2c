import math

import numpy as np
import pytest

from gfdp import polyeval
from gfdp.errors import NumericError, ParameterError


def naive_root_values(f):
    # direct O(n^2) sum under the +i pi k l / n kernel
    f = np.asarray(f, dtype=float)
    n = f.size
    l = np.arange(2 * n)
    k = np.arange(n)
    return np.exp(1j * np.pi * np.outer(l, k) / n) @ f


class TestEvalM:
    def test_counting_two_values(self):
        m = polyeval.eval_m([1.0, 1.0])
        assert np.allclose(m, [2.0, 1.0 + 1.0j, 0.0, 1.0 - 1.0j], atol=1e-15)

    def test_single_weight_is_constant_spectrum(self):
        assert polyeval.eval_m([3.0]).tolist() == [3.0 + 0.0j, 3.0 + 0.0j]

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16, 33, 64, 128])
    def test_matches_direct_sum(self, n):
        rng = np.random.default_rng(100 + n)
        f = rng.uniform(-1.0, 2.0, n)
        fast = polyeval.eval_m(f)
        slow = naive_root_values(f)
        assert np.max(np.abs(fast - slow)) <= 1e-10 * (1.0 + np.abs(f).sum())

    def test_conjugate_symmetry_is_exact(self):
        f = np.random.default_rng(7).uniform(0.0, 1.0, 12)
        m = polyeval.eval_m(f)
        n = f.size
        for l in range(1, n):
            assert m[2 * n - l] == np.conj(m[l])
        assert m[0].imag == 0.0
        assert m[n].imag == 0.0

    def test_rejects_empty_and_matrix_input(self):
        with pytest.raises(ParameterError):
            polyeval.eval_m([])
        with pytest.raises(ParameterError):
            polyeval.eval_m([[1.0, 2.0]])

    def test_rejects_nonfinite(self):
        with pytest.raises(NumericError):
            polyeval.eval_m([1.0, np.inf])


class TestSqrtSpectrum:
    def test_squares_back_to_spectrum(self):
        f = np.random.default_rng(3).uniform(-0.5, 1.5, 20)
        m = polyeval.eval_m(f)
        zeta = polyeval.sqrt_spectrum(m)
        assert np.allclose(zeta * zeta, m, rtol=1e-12, atol=1e-12)

    def test_principal_branch_nonnegative_real_part(self):
        f = np.random.default_rng(4).uniform(-1.0, 1.0, 17)
        zeta = polyeval.sqrt_spectrum(polyeval.eval_m(f))
        assert (zeta.real >= 0.0).all()

    def test_negative_axis_maps_to_plus_i_for_both_zero_signs(self):
        up = polyeval.sqrt_spectrum(np.array([-4.0 + 0.0j]))
        down = polyeval.sqrt_spectrum(np.array([complex(-4.0, -0.0)]))
        assert up[0] == 2.0j
        assert down[0] == 2.0j

    def test_known_value_first_quadrant(self):
        z = polyeval.sqrt_spectrum(np.array([1.0 + 1.0j]))[0]
        assert abs(z - (1.09868411346781 + 0.45508986056222733j)) < 1e-15


class TestEvalB:
    def test_requires_even_length(self):
        with pytest.raises(ParameterError):
            polyeval.eval_b([1.0, 2.0, 3.0])

    def test_counting_two_closed_form(self):
        prof = polyeval.build_profile([1.0, 1.0])
        r8 = 2.0 ** 0.25
        want = np.array(
            [
                (math.sqrt(2) + 2 * r8 * math.cos(math.pi / 8)) / 4,
                (math.sqrt(2) - 2 * r8 * math.sin(math.pi / 8)) / 4,
                (math.sqrt(2) - 2 * r8 * math.cos(math.pi / 8)) / 4,
                (math.sqrt(2) + 2 * r8 * math.sin(math.pi / 8)) / 4,
            ]
        )
        assert np.max(np.abs(prof.b_vals - want)) < 1e-14

    def test_single_weight(self):
        prof = polyeval.build_profile([3.0])
        assert np.allclose(prof.b_vals, [math.sqrt(3), 0.0], atol=1e-15)

    def test_self_convolution_recovers_spectrum_coefficients(self):
        # b * b (circularly) has coefficients m_l / 2n
        f = np.random.default_rng(11).uniform(0.0, 1.0, 9)
        prof = polyeval.build_profile(f)
        conv = np.fft.ifft(np.fft.fft(prof.b_vals) ** 2)
        assert np.allclose(conv, np.fft.ifft(prof.m_vals), atol=1e-12)


class TestWindowPolynomial:
    def test_interpolates_weights_and_vanishes_elsewhere(self):
        f = [1.0, 1.0]
        m = polyeval.eval_m(f)
        assert abs(polyeval.eval_a(m, 0) - 1.0) < 1e-14
        assert abs(polyeval.eval_a(m, 1) - 1.0) < 1e-14
        for d in (-2, -1, 2, 3):
            assert abs(polyeval.eval_a(m, d)) < 1e-14

    def test_random_weights_all_exponents(self):
        rng = np.random.default_rng(21)
        f = rng.uniform(0.0, 1.0, 13)
        n = f.size
        m = polyeval.eval_m(f)
        for d in range(-n, 2 * n):
            want = f[d] if 0 <= d < n else 0.0
            assert abs(polyeval.eval_a(m, d) - want) < 1e-12

    def test_exponent_domain_enforced(self):
        m = polyeval.eval_m([1.0, 1.0])
        with pytest.raises(ParameterError):
            polyeval.eval_a(m, -3)
        with pytest.raises(ParameterError):
            polyeval.eval_a(m, 4)

    def test_values_match_direct_polynomial_evaluation(self):
        f = np.random.default_rng(5).uniform(0.0, 1.0, 6)
        m = polyeval.eval_m(f)
        # a_f has coefficients m / 2n; evaluate it directly at w^{-d}
        n = f.size
        w = np.exp(1j * np.pi / n)
        for d in (0, 3, 7, -2):
            val = ((m / (2 * n)) * w ** (-d * np.arange(2 * n))).sum()
            assert abs(val - polyeval.eval_a(m, d)) < 1e-12


class TestGeneratorSum:
    @pytest.mark.parametrize(
        "k,p,want",
        [(0, 4, 4.0), (1, 4, 0.0), (2, 4, 0.0), (4, 4, 4.0), (-3, 3, 3.0), (5, 1, 1.0)],
    )
    def test_full_cycle_sums(self, k, p, want):
        assert abs(polyeval.generator_sum(k, p) - want) < 1e-12

    def test_order_must_be_positive_integer(self):
        with pytest.raises(ParameterError):
            polyeval.generator_sum(1, 0)
        with pytest.raises(ParameterError):
            polyeval.generator_sum(1, 2.0)


class TestProfile:
    def test_zero_weights_give_zero_vectors(self):
        prof = polyeval.build_profile([0.0, 0.0, 0.0])
        assert not prof.m_vals.any()
        assert not prof.zeta.any()
        assert not prof.b_vals.any()

    def test_json_dict_shape(self):
        prof = polyeval.build_profile([1.0, 0.5])
        d = prof.as_json_dict()
        assert d["n"] == 2
        assert d["coeffs"] == [1.0, 0.5]
        assert len(d["m_vals"]) == 4
        assert all(len(pair) == 2 for pair in d["zeta"])
        assert all(isinstance(v, float) for pair in d["b_vals"] for v in pair)
