"""Thresholded spectral cut-off deconvolution and its risk."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_int
from .exceptions import InsufficientRangeError
from .spectral import SpectralVector


@dataclass(frozen=True, eq=False)
class DeconvEstimate:
    """Coefficients of the cut-off estimate f_k.

    Attributes
    ----------
    k : int
        Cut-off dimension.
    spectrum : SpectralVector
        Coefficients for |j| <= k; c_0 = 1.
    threshold_hits : frozenset of int
        Indices j (both signs) where |phi_hat_j|^2 < 1/m zeroed the term.
    m : int
        Error-sample size used in the threshold.
    """

    k: int
    spectrum: SpectralVector
    threshold_hits: frozenset
    m: int

    def to_dict(self):
        return {
            "k": self.k,
            "m": self.m,
            "coeffs": [
                {"j": int(j), "re": float(c.real), "im": float(c.imag)}
                for j, c in zip(self.spectrum.indices, self.spectrum.coeffs)
            ],
            "threshold_hits": sorted(int(j) for j in self.threshold_hits),
        }

    @classmethod
    def from_dict(cls, data):
        coeffs = sorted(data["coeffs"], key=lambda row: row["j"])
        spec = SpectralVector(np.array([complex(r["re"], r["im"]) for r in coeffs]))
        return cls(k=int(data["k"]), spectrum=spec,
                   threshold_hits=frozenset(int(j) for j in data["threshold_hits"]),
                   m=int(data["m"]))


def _check_range(g_hat, phi_hat, k):
    have = min(g_hat.max_index, phi_hat.max_index)
    if have < k:
        raise InsufficientRangeError(
            f"spectra cover |j| <= {have} but cut-off k = {k} was requested")


def _passing(phi_half, m):
    # ties |phi|^2 == 1/m count as passing
    return np.abs(phi_half) ** 2 >= 1.0 / m


def deconvolve(g_hat, phi_hat, m, k):
    """Form f_k = 1 + sum_{0<|j|<=k} (g_j/phi_j) 1{|phi_j|^2 >= 1/m} e_j."""
    m = check_positive_int(m, "m")
    k = check_positive_int(k, "k", minimum=0)
    _check_range(g_hat, phi_hat, k)
    g = g_hat.nonnegative()[1:k + 1]
    phi = phi_hat.nonnegative()[1:k + 1]
    keep = _passing(phi, m)
    half = np.zeros(k + 1, dtype=complex)
    half[0] = 1.0
    half[1:][keep] = g[keep] / phi[keep]
    failed = np.nonzero(~keep)[0] + 1
    hits = frozenset(failed.tolist()) | frozenset((-failed).tolist())
    return DeconvEstimate(k=k, spectrum=SpectralVector.from_nonnegative(half),
                          threshold_hits=hits, m=m)


def derivative_transform(est, s):
    """Spectrum of the s-th weak derivative.

    With e_j(x) = exp(-i 2 pi j x) we have e_j' = -i 2 pi j e_j, so the map is
    c_j -> (-2 i pi j)^s c_j. Weighted norms do not depend on the sign.
    """
    s = check_positive_int(s, "s", minimum=0)
    spec = est.spectrum if isinstance(est, DeconvEstimate) else est
    if s == 0:
        return spec
    js = spec.indices
    factor = (-2j * np.pi * js) ** s
    factor[js == 0] = 0.0
    return SpectralVector(spec.coeffs * factor)


def contrast_norm_sq(g_hat, phi_hat, m, k, omega):
    """||f_k||_w^2 computed term by term from the raw spectra.

    This deliberately avoids building the estimate; it sums over both signs
    of j explicitly so it can cross-check ``weighted_norm_sq`` of the
    assembled estimate.
    """
    m = check_positive_int(m, "m")
    k = check_positive_int(k, "k", minimum=0)
    _check_range(g_hat, phi_hat, k)
    total = 1.0
    for j in range(-k, k + 1):
        if j == 0:
            continue
        p2 = abs(phi_hat[j]) ** 2
        if p2 >= 1.0 / m:
            total += omega(j) * abs(g_hat[j]) ** 2 / p2
    return total


def contrast_path(g_hat, phi_hat, m, k_max, omega):
    """Vector of ||f_k||_w^2 for k = 1..k_max (cumulative form)."""
    _check_range(g_hat, phi_hat, k_max)
    g = g_hat.nonnegative()[1:k_max + 1]
    phi = phi_hat.nonnegative()[1:k_max + 1]
    keep = _passing(phi, m)
    terms = np.zeros(k_max)
    p2 = np.abs(phi[keep]) ** 2
    terms[keep] = 2.0 * omega.prefix(k_max)[1:][keep] * np.abs(g[keep]) ** 2 / p2
    return 1.0 + np.cumsum(terms)


def exact_risk(est, truth, omega, tail_bound, tail=None, tail_tol=1e-10):
    """sum_{|j|<=tail_bound} w_j |[f_hat]_j - [f]_j|^2, plus ``tail``.

    Parameters
    ----------
    est : DeconvEstimate or SpectralVector
    truth : SpectralVector
        Exact coefficients, covering at least ``tail_bound``.
    tail : float, optional
        Analytic value of sum_{|j|>tail_bound} w_j |[f]_j|^2. When omitted,
        the weighted boundary coefficient must be below ``tail_tol`` as
        evidence the tail is negligible.
    """
    spec = est.spectrum if isinstance(est, DeconvEstimate) else est
    if spec.max_index > tail_bound:
        raise InsufficientRangeError(
            f"estimate reaches |j| = {spec.max_index} beyond tail_bound {tail_bound}")
    if truth.max_index < tail_bound:
        raise InsufficientRangeError(
            f"truth known only up to {truth.max_index}, tail_bound is {tail_bound}")
    f = truth.truncate(tail_bound)
    diff = spec.pad(tail_bound).coeffs - f.coeffs
    risk = float(np.sum(omega(f.indices) * np.abs(diff) ** 2))
    if tail is None:
        edge = 2.0 * omega(tail_bound) * abs(f[tail_bound]) ** 2
        if edge > tail_tol:
            raise ValueError("tail bias unbounded")
        return risk
    return risk + float(tail)
