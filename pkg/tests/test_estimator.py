import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from circdeconv import CircularDeconvolution
from circdeconv.deconvolution import deconvolve, exact_risk
from circdeconv.simulation import draw_observations, make_rng, smooth_trig_poly, wrapped_laplace
from circdeconv.spectral import empirical_spectrum, evaluate
from circdeconv.weights import make_weights

from conftest import CAL_EMPIRICAL, CAL_KNOWN, OS_SHAPE, OS_SIGMA

pytestmark = pytest.mark.filterwarnings("ignore::circdeconv.exceptions.AssumptionWarning")


@pytest.fixture(scope="module")
def data():
    f, phi = smooth_trig_poly(), wrapped_laplace(OS_SIGMA, OS_SHAPE)
    y, eps = draw_observations(f, phi, 4000, 4000, make_rng(11))
    return f, y.values, eps.values


def test_params_roundtrip():
    est = CircularDeconvolution(mode="fixed", k=4, s=1)
    params = est.get_params()
    assert params["k"] == 4 and params["mode"] == "fixed" and params["s"] == 1
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    est.set_params(k=7)
    assert est.k == 7


@pytest.mark.parametrize("kwargs,msg", [
    ({"mode": "bayes"}, "mode must be"),
    ({"mode": "fixed"}, "k"),
    ({"mode": "known", "lambda_weights": "os:1"}, "requires lambda_weights and d"),
    ({"mode": "empirical", "lambda_weights": "os:1"}, "lambda not allowed"),
    ({"s": -1}, "s"),
])
def test_bad_params(kwargs, msg):
    with pytest.raises(ValueError, match=msg):
        CircularDeconvolution(**kwargs).fit([0.1, 0.2], [0.3, 0.4])


def test_bad_data():
    with pytest.raises(ValueError):
        CircularDeconvolution(mode="fixed", k=1).fit([0.1, 1.0], [0.3])


def test_not_fitted():
    with pytest.raises(NotFittedError):
        CircularDeconvolution().predict([0.5])


def test_fixed_matches_pipeline(data):
    _, y, eps = data
    est = CircularDeconvolution(mode="fixed", k=5).fit(y, eps)
    direct = deconvolve(empirical_spectrum(y, 5), empirical_spectrum(eps, 5), eps.size, 5)
    assert est.estimate_.spectrum == direct.spectrum
    assert est.k_ == 5 and est.selection_ is None
    x = np.array([0.0, 0.25, 0.7])
    np.testing.assert_allclose(est.predict(x), evaluate(direct.spectrum, x), atol=1e-13)


def test_grid_matches_predict(data):
    _, y, eps = data
    est = CircularDeconvolution(mode="fixed", k=6).fit(y, eps)
    x, vals = est.grid(64)
    np.testing.assert_allclose(vals, est.predict(x), atol=1e-12)
    assert vals.mean() == pytest.approx(1.0, abs=1e-12)


def test_derivative_predict(data):
    _, y, eps = data
    est = CircularDeconvolution(mode="fixed", k=6).fit(y, eps)
    deriv = clone(est).set_params(s=1).fit(y, eps)
    h = 1e-5
    x = np.array([0.2, 0.5])
    fd = (est.predict(x + h) - est.predict(x - h)) / (2 * h)
    np.testing.assert_allclose(deriv.predict(x), fd, rtol=1e-6, atol=1e-6)


def test_adaptive_modes(data):
    f, y, eps = data
    truth = f.spectrum(30)
    omega = make_weights("const")
    fits = {
        "empirical": CircularDeconvolution(penalty_const=CAL_EMPIRICAL),
        "known": CircularDeconvolution(mode="known", lambda_weights="os:1", d=2,
                                       penalty_const=CAL_KNOWN),
    }
    for name, est in fits.items():
        est.fit(y, eps)
        assert est.k_ == est.selection_.k_hat >= 1
        risk = exact_risk(est.estimate_.spectrum, truth, omega, 30)
        best = min(exact_risk(deconvolve(empirical_spectrum(y, k), empirical_spectrum(eps, k),
                                         eps.size, k).spectrum, truth, omega, 30)
                   for k in range(1, 26))
        assert risk <= 10 * best, name


def test_default_constants_fit(data):
    _, y, eps = data
    default = CircularDeconvolution().fit(y, eps).selection_
    half = CircularDeconvolution(penalty_const=300).fit(y, eps).selection_
    np.testing.assert_allclose(default.penalty, 2 * half.penalty, rtol=1e-12)
