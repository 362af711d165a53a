"""Circular samples, Fourier coefficients and coefficient-space operations.

The circle is identified with [0, 1). Coefficients follow the convention

    [p]_j = integral of p(x) * exp(i 2 pi j x) dx,

so that p(x) = sum_j [p]_j * exp(-i 2 pi j x). A density always has
[p]_0 = 1, and a real function has [p]_{-j} = conj([p]_j).
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_circular_values, check_positive_int
from .exceptions import DataFormatError, InsufficientRangeError

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class CircularSample:
    """An ordered batch of observations on the circle [0, 1)."""

    values: np.ndarray

    def __post_init__(self):
        arr = check_circular_values(self.values)
        arr = np.array(arr, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def size(self):
        return int(self.values.size)

    def __len__(self):
        return self.size

    def shift(self, c):
        """Rotate every observation by ``c`` (mod 1)."""
        return CircularSample(np.mod(self.values + c, 1.0) % 1.0)


@dataclass(frozen=True, eq=False)
class SpectralVector:
    """Complex Fourier coefficients c_j for j = -K..K.

    ``coeffs[j + K]`` holds c_j.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=complex)
        if arr.ndim != 1 or arr.size % 2 != 1:
            raise DataFormatError("spectrum must have odd length 2K+1")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_nonnegative(cls, c):
        """Build a Hermitian spectrum from c_0..c_K, mirroring by conjugation."""
        c = np.asarray(c, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise DataFormatError("need at least c_0")
        return cls(np.concatenate([np.conj(c[:0:-1]), c]))

    @classmethod
    def from_mapping(cls, mapping, max_index=None):
        """Build a spectrum from ``{j: c_j}``; missing indices are zero.

        Only indices j >= 0 are read when the mapping is one-sided, in which
        case negative indices are filled by conjugation.
        """
        if max_index is None:
            max_index = max(abs(j) for j in mapping)
        K = int(max_index)
        out = np.zeros(2 * K + 1, dtype=complex)
        one_sided = all(j >= 0 for j in mapping)
        for j, c in mapping.items():
            if abs(j) <= K:
                out[j + K] = c
                if one_sided and j > 0:
                    out[K - j] = np.conj(c)
        return cls(out)

    @property
    def max_index(self):
        return (self.coeffs.size - 1) // 2

    @property
    def indices(self):
        K = self.max_index
        return np.arange(-K, K + 1)

    def __getitem__(self, j):
        K = self.max_index
        if abs(j) > K:
            raise IndexError(f"index {j} outside -{K}..{K}")
        return complex(self.coeffs[j + K])

    def nonnegative(self):
        """Coefficients c_0..c_K."""
        return self.coeffs[self.max_index:]

    def truncate(self, k):
        K = self.max_index
        if k > K:
            raise InsufficientRangeError(f"cannot truncate spectrum of max index {K} to {k}")
        return SpectralVector(self.coeffs[K - k:K + k + 1])

    def pad(self, k):
        """Extend with zeros up to max index ``k`` (no-op if already wider)."""
        K = self.max_index
        if k <= K:
            return self
        extra = np.zeros(k - K, dtype=complex)
        return SpectralVector(np.concatenate([extra, self.coeffs, extra]))

    def hermitian_defect(self):
        """max_j |c_{-j} - conj(c_j)|."""
        return float(np.max(np.abs(self.coeffs[::-1] - np.conj(self.coeffs))))

    def is_hermitian(self, tol=0.0):
        return self.hermitian_defect() <= tol

    def __eq__(self, other):
        if not isinstance(other, SpectralVector):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __repr__(self):
        return f"SpectralVector(max_index={self.max_index})"


def _as_sample(sample):
    if isinstance(sample, CircularSample):
        return sample
    return CircularSample(sample)


def empirical_coefficient(sample, j):
    """(1/n) * sum_k exp(i 2 pi j Y_k)."""
    s = _as_sample(sample)
    return complex(_coefficient(s.values, int(j)))


def _coefficient(values, j):
    # reduce j*x mod 1 before scaling by 2*pi so large j keep full precision
    phase = j * values
    np.subtract(phase, np.floor(phase), out=phase)
    phase *= _TWO_PI
    return np.mean(np.cos(phase)) + 1j * np.mean(np.sin(phase))


def empirical_spectrum(sample, K):
    """Empirical coefficients for |j| <= K.

    Each c_j with j >= 0 is a direct O(n) sum in index order (numpy's
    pairwise reduction, deterministic for a given array); c_{-j} is set to
    conj(c_j) so Hermitian symmetry holds exactly.
    """
    s = _as_sample(sample)
    K = check_positive_int(K, "K", minimum=0)
    half = np.empty(K + 1, dtype=complex)
    half[0] = 1.0
    for j in range(1, K + 1):
        half[j] = _coefficient(s.values, j)
    return SpectralVector.from_nonnegative(half)


def weighted_norm_sq(spec, w):
    """sum_{|j|<=K} w_j |c_j|^2."""
    js = spec.indices
    return float(np.sum(w(js) * np.abs(spec.coeffs) ** 2))


def convolve_spectra(f_spec, phi_spec):
    """Coefficient-wise product; the longer input is truncated to the shorter."""
    k = min(f_spec.max_index, phi_spec.max_index)
    return SpectralVector(f_spec.truncate(k).coeffs * phi_spec.truncate(k).coeffs)


def synthesize(spec, grid_size, imag_tol=1e-10):
    """Evaluate sum_j c_j exp(-i 2 pi j x) at x_t = t / grid_size.

    Phases are formed from the integer product j*t mod grid_size, so the
    evaluation has no drift in t.
    """
    grid_size = check_positive_int(grid_size, "grid_size")
    js = spec.indices
    t = np.arange(grid_size)
    phase = np.mod(np.outer(t, js), grid_size) * (_TWO_PI / grid_size)
    vals = np.exp(-1j * phase) @ spec.coeffs
    scale = max(1.0, float(np.max(np.abs(vals.real))))
    if np.max(np.abs(vals.imag)) > imag_tol * scale:
        raise ValueError("spectrum not real-valued")
    return vals.real


def evaluate(spec, x):
    """Evaluate the real series at arbitrary points ``x`` in [0, 1).

    Uses Horner's scheme in w = exp(-i 2 pi x), which is stable on |w| = 1.
    """
    x = np.asarray(x, dtype=float)
    c = spec.nonnegative()
    w = np.exp(-1j * _TWO_PI * x)
    acc = np.zeros(x.shape, dtype=complex)
    for cj in c[:0:-1]:
        acc = (acc + cj) * w
    return c[0].real + 2.0 * acc.real
