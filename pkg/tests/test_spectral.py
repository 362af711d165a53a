import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circdeconv.exceptions import DataFormatError, InsufficientRangeError
from circdeconv.simulation import smooth_trig_poly, wrapped_laplace
from circdeconv.spectral import (CircularSample, SpectralVector, convolve_spectra,
                                 empirical_coefficient, empirical_spectrum, evaluate, synthesize,
                                 weighted_norm_sq)
from circdeconv.weights import make_weights


def naive_coefficient(values, j):
    # oracle: plain Python complex summation
    return sum(cmath.exp(2j * math.pi * j * v) for v in values) / len(values)


circle_values = st.lists(
    st.floats(min_value=0.0, max_value=1.0, exclude_max=True, allow_nan=False), min_size=1,
    max_size=40)


class TestCircularSample:
    def test_rejects_one(self):
        with pytest.raises(DataFormatError, match=r"value outside \[0,1\)"):
            CircularSample([0.2, 1.0])

    def test_rejects_negative_and_nan(self):
        with pytest.raises(DataFormatError):
            CircularSample([-0.1])
        with pytest.raises(DataFormatError):
            CircularSample([np.nan])

    def test_empty(self):
        with pytest.raises(DataFormatError, match="empty sample"):
            CircularSample([])

    def test_read_only(self):
        s = CircularSample([0.1, 0.2])
        assert s.size == 2
        with pytest.raises(ValueError):
            s.values[0] = 0.5

    def test_column_vector_accepted(self):
        assert CircularSample(np.array([[0.1], [0.3]])).size == 2


class TestEmpiricalCoefficient:
    def test_j0_is_one(self):
        assert empirical_coefficient([0.3, 0.9], 0) == 1 + 0j

    def test_two_antipodal_points(self):
        assert abs(empirical_coefficient([0.0, 0.5], 1)) < 1e-15

    def test_quarter(self):
        c = empirical_coefficient([0.25], 1)
        assert abs(c - 1j) < 1e-15

    def test_three_points_j2(self):
        vals = [0.1, 0.2, 0.7]
        assert abs(empirical_coefficient(vals, 2) - naive_coefficient(vals, 2)) < 1e-14

    def test_large_index_keeps_precision(self):
        vals = [0.123456789, 0.987654321]
        for j in (1000, 123457):
            assert abs(empirical_coefficient(vals, j) - naive_coefficient(vals, j)) < 1e-9

    @settings(max_examples=60, deadline=None)
    @given(circle_values, st.integers(-30, 30))
    def test_matches_naive(self, values, j):
        assert abs(empirical_coefficient(values, j) - naive_coefficient(values, j)) < 1e-12


class TestEmpiricalSpectrum:
    def test_k0(self):
        spec = empirical_spectrum([0.4], 0)
        assert spec.max_index == 0 and spec[0] == 1

    def test_antipodal(self):
        spec = empirical_spectrum([0.0, 0.5], 1)
        np.testing.assert_allclose(spec.coeffs, [0, 1, 0], atol=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(circle_values, st.integers(0, 25))
    def test_hermitian_exact_and_bounded(self, values, K):
        spec = empirical_spectrum(values, K)
        assert spec.hermitian_defect() == 0.0
        assert np.all(np.abs(spec.coeffs) <= 1 + 1e-12)

    def test_uniform_concentration(self):
        # |c_j| <= 3/sqrt(n) for uniform data in at least 99 of 100 seeded runs
        good = 0
        for seed in range(100):
            x = np.random.default_rng(seed).random(1000)
            spec = empirical_spectrum(x, 5)
            good += np.all(np.abs(spec.coeffs[6:]) <= 3 / math.sqrt(1000))
        assert good >= 99

    def test_shift_covariance(self, rng):
        x = rng.random(50)
        c = 0.3141
        a = empirical_spectrum(x, 6)
        b = empirical_spectrum(CircularSample(x).shift(c), 6)
        js = a.indices
        np.testing.assert_allclose(b.coeffs, a.coeffs * np.exp(2j * np.pi * js * c), atol=1e-12)


class TestSpectralVector:
    def test_from_mapping_one_sided(self):
        spec = SpectralVector.from_mapping({0: 1, 1: 0.5 + 0.1j})
        assert spec[-1] == 0.5 - 0.1j

    def test_even_length_rejected(self):
        with pytest.raises(DataFormatError):
            SpectralVector(np.ones(4))

    def test_truncate_and_pad(self):
        spec = SpectralVector.from_nonnegative([1, 0.5, 0.25])
        assert spec.truncate(1) == SpectralVector.from_nonnegative([1, 0.5])
        assert spec.pad(4).max_index == 4 and spec.pad(4)[4] == 0
        with pytest.raises(InsufficientRangeError):
            spec.truncate(3)

    def test_index_error(self):
        with pytest.raises(IndexError):
            SpectralVector.from_nonnegative([1])[1]


class TestWeightedNorm:
    def test_unit(self):
        assert weighted_norm_sq(SpectralVector.from_nonnegative([1]), make_weights("sobolev", 2)) == 1

    def test_derivative_weights(self):
        spec = SpectralVector.from_nonnegative([1, 0.5])
        assert weighted_norm_sq(spec, make_weights("derivative", 1)) == pytest.approx(1.5)

    def test_parseval_quadrature(self):
        spec = SpectralVector.from_nonnegative([1, 0.3 - 0.2j, 0.1j])
        vals = synthesize(spec, 2048)
        quad = np.mean(vals ** 2)
        assert abs(weighted_norm_sq(spec, make_weights("const")) - quad) < 1e-6


class TestConvolve:
    def test_uniform_absorbs(self):
        phi = wrapped_laplace(0.1).spectrum(5)
        out = convolve_spectra(SpectralVector.from_nonnegative([1, 0, 0, 0, 0, 0]), phi)
        assert out == SpectralVector.from_nonnegative([1, 0, 0, 0, 0, 0])

    def test_point_mass_is_identity(self):
        phi = wrapped_laplace(0.1).spectrum(5)
        assert convolve_spectra(SpectralVector(np.ones(11)), phi) == phi

    def test_scalar(self):
        out = convolve_spectra(SpectralVector.from_nonnegative([1, 0.3]),
                               SpectralVector.from_nonnegative([1, 0.5]))
        assert out[1] == pytest.approx(0.15)

    def test_truncates_to_shorter(self):
        out = convolve_spectra(SpectralVector.from_nonnegative([1, 0.3, 0.1]),
                               SpectralVector.from_nonnegative([1, 0.5]))
        assert out.max_index == 1

    def test_grid_convolution(self):
        # oracle: circular convolution of sampled densities by direct DFT
        G = 4096
        f = smooth_trig_poly()
        phi = wrapped_laplace(0.15)
        fv = f.density(G)
        # closed-form wrapped Laplace density with scale b; the kink at 0 aliases
        # at about 2/(b^2 4 pi^2 G^2), near 2e-7 here
        b = 0.15
        x = np.arange(G) / G
        pv = (np.exp(-x / b) + np.exp(-(1 - x) / b)) / (2 * b * (1 - np.exp(-1 / b)))
        gv = np.real(np.fft.ifft(np.fft.fft(fv) * np.fft.fft(pv))) / G
        K = 10
        t = np.arange(G) / G
        grid_coeffs = np.array([np.mean(gv * np.exp(2j * np.pi * j * t)) for j in range(-K, K + 1)])
        ours = convolve_spectra(f.spectrum(K), phi.spectrum(K)).coeffs
        assert np.max(np.abs(grid_coeffs - ours)) < 1e-6


class TestSynthesize:
    def test_constant(self):
        np.testing.assert_allclose(synthesize(SpectralVector.from_nonnegative([1]), 4), [1] * 4)

    def test_cosine(self):
        vals = synthesize(SpectralVector.from_nonnegative([1, 0.5]), 4)
        np.testing.assert_allclose(vals, [2, 1, 0, 1], atol=1e-15)

    def test_non_hermitian(self):
        with pytest.raises(ValueError, match="spectrum not real-valued"):
            synthesize(SpectralVector(np.array([0.0, 1.0, 0.5])), 8)

    def test_mean_is_c0(self, rng):
        c = rng.normal(size=8) + 1j * rng.normal(size=8)
        c[0] = 1
        vals = synthesize(SpectralVector.from_nonnegative(c), 64)
        assert abs(vals.mean() - 1) < 1e-10

    def test_evaluate_agrees(self, rng):
        c = np.concatenate([[1], 0.2 * (rng.normal(size=6) + 1j * rng.normal(size=6))])
        spec = SpectralVector.from_nonnegative(c)
        x = np.arange(128) / 128
        np.testing.assert_allclose(evaluate(spec, x), synthesize(spec, 128), atol=1e-13)
