"""scikit-learn style front end for the adaptive deconvolution estimator."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_circular_values, check_positive_int
from .deconvolution import deconvolve, derivative_transform
from .selection import (EMPIRICAL_PENALTY, KNOWN_PENALTY, empirical_bounds, empirical_error_spectrum,
                        known_tables, select_empirical, select_known)
from .spectral import CircularSample, empirical_spectrum, evaluate, synthesize
from .weights import WeightSequence, parse_omega, parse_weights

MODES = ("fixed", "known", "empirical")


def _resolve_weights(value, parser):
    if isinstance(value, WeightSequence):
        return value
    return parser(value)


class CircularDeconvolution(BaseEstimator):
    """Series estimator of a circular density observed with additive noise.

    ``fit(Y, eps)`` takes the contaminated sample Y = X + noise (mod 1) and an
    independent sample of the noise itself; the fitted object evaluates the
    cut-off estimate of the density of X (or its ``s``-th derivative).

    Parameters
    ----------
    mode : {"empirical", "known", "fixed"}
        How the cut-off k is chosen. ``empirical`` uses only the data and
        ``omega``; ``known`` additionally needs ``lambda_weights`` and ``d``;
        ``fixed`` uses ``k`` as given.
    k : int, optional
        Cut-off for ``mode="fixed"``.
    omega : str or WeightSequence, default "const"
        Loss weights, ``"const"`` or ``"sobolev:s"`` (w_j = |j|^(2s)).
    lambda_weights : str or WeightSequence, optional
        Error-class weights (``"os:a"`` or ``"ss:a"``) for ``mode="known"``.
    d : float, optional
        Corridor constant of the error class for ``mode="known"``.
    s : int, default 0
        Derivative order used by :meth:`predict` and :meth:`grid`.
    penalty_const : float, optional
        Overrides the penalty constant (60 for known, 600 for empirical).
    strict : bool, default False
        Raise instead of warn when a sample-size assumption fails.

    Attributes
    ----------
    k_ : int
        Selected cut-off.
    estimate_ : DeconvEstimate
    selection_ : SelectionResult or None
    g_hat_, phi_hat_ : SpectralVector
        Empirical spectra of Y and of the noise sample.
    n_samples_, m_samples_ : int
    """

    def __init__(self, mode="empirical", k=None, omega="const", lambda_weights=None,
                 d=None, s=0, penalty_const=None, strict=False):
        self.mode = mode
        self.k = k
        self.omega = omega
        self.lambda_weights = lambda_weights
        self.d = d
        self.s = s
        self.penalty_const = penalty_const
        self.strict = strict

    def _validate_params(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "fixed":
            check_positive_int(self.k, "k")
        if self.mode == "known" and (self.lambda_weights is None or self.d is None):
            raise ValueError("known mode requires lambda_weights and d")
        if self.mode == "empirical" and (self.lambda_weights is not None or self.d is not None):
            raise ValueError("lambda not allowed in empirical mode")
        check_positive_int(self.s, "s", minimum=0)

    def fit(self, X, eps):
        """Fit from the contaminated sample ``X`` and the noise sample ``eps``."""
        self._validate_params()
        y = CircularSample(check_circular_values(X, "Y"))
        e = CircularSample(check_circular_values(eps, "eps"))
        n, m = y.size, e.size
        omega = _resolve_weights(self.omega, parse_omega)

        selection = None
        if self.mode == "fixed":
            K = self.k
            g_hat, phi_hat = empirical_spectrum(y, K), empirical_spectrum(e, K)
            k = self.k
        elif self.mode == "known":
            lam = _resolve_weights(self.lambda_weights, parse_weights)
            K = known_tables(omega, lam, self.d, n, m, strict=self.strict).cap
            g_hat, phi_hat = empirical_spectrum(y, K), empirical_spectrum(e, K)
            pc = KNOWN_PENALTY if self.penalty_const is None else self.penalty_const
            selection = select_known(g_hat, phi_hat, m, n, omega, lam, self.d,
                                     penalty_const=pc, strict=self.strict)
            k = selection.k_hat
        else:
            phi_hat = empirical_error_spectrum(e, omega, n, m)
            pc = EMPIRICAL_PENALTY if self.penalty_const is None else self.penalty_const
            N_hat, M_hat, _ = empirical_bounds(phi_hat, omega, n, m)
            g_hat = empirical_spectrum(y, min(N_hat, M_hat))
            selection = select_empirical(g_hat, phi_hat, n, m, omega, penalty_const=pc)
            k = selection.k_hat

        self.n_samples_, self.m_samples_ = n, m
        self.g_hat_, self.phi_hat_ = g_hat, phi_hat
        self.selection_ = selection
        self.k_ = int(k)
        self.estimate_ = deconvolve(g_hat, phi_hat, m, self.k_)
        self.omega_ = omega
        return self

    @property
    def spectrum_(self):
        """Spectrum of the s-th derivative of the fitted estimate."""
        check_is_fitted(self, "estimate_")
        return derivative_transform(self.estimate_, self.s)

    def predict(self, X):
        """Evaluate the estimate (or its s-th derivative) at points ``X``."""
        check_is_fitted(self, "estimate_")
        x = check_circular_values(X, "X")
        return evaluate(self.spectrum_, x)

    def grid(self, grid_size=512):
        """Return ``(x, values)`` on the grid x_t = t / grid_size."""
        check_is_fitted(self, "estimate_")
        x = np.arange(grid_size) / grid_size
        return x, synthesize(self.spectrum_, grid_size)
