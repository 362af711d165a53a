"""Weight sequences, density classes and the minimax rate oracle.

A weight sequence is a strictly positive symmetric map j -> w_j with
w_0 = 1. Four parametric families are provided:

==========  ======================  ====================
family      w_j for j != 0          constraint
==========  ======================  ====================
sobolev     |j|^(2p)                p > 1/2
derivative  |j|^(2s)                s >= 0 integer
os          |j|^(-2a)               a > 1/2
ss          exp(-|j|^(2a))          a > 0
==========  ======================  ====================
"""

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_positive_int, check_real
from .exceptions import PreconditionError


class WeightSequence:
    """Lazily evaluated symmetric weights with w_0 = 1.

    Parameters
    ----------
    func : callable
        Maps an integer array of indices ``j >= 1`` to positive weights.
    family : str
        Family tag, used in reports and serialization.
    param : float or None
        The family parameter (p, s or a).

    Notes
    -----
    Values for 0..K are cached as one growing prefix array per instance.
    The prefix is replaced atomically under a lock, so concurrent readers
    see either the old or the new array.
    """

    def __init__(self, func, family="custom", param=None):
        self._func = func
        self.family = family
        self.param = param
        self._prefix = np.ones(1)
        self._lock = threading.Lock()

    def prefix(self, K):
        """Array of w_0..w_K."""
        K = int(K)
        cached = self._prefix
        if cached.size > K:
            return cached[:K + 1]
        with self._lock:
            cached = self._prefix
            if cached.size <= K:
                new_size = max(K + 1, 2 * cached.size)
                js = np.arange(cached.size, new_size)
                with np.errstate(over="ignore", under="ignore"):
                    tail = np.asarray(self._func(js), dtype=float)
                cached = np.concatenate([cached, tail])
                self._prefix = cached
        return cached[:K + 1]

    def __call__(self, j):
        """Evaluate at an integer or an integer array (negative indices allowed)."""
        ja = np.abs(np.asarray(j, dtype=np.int64))
        if ja.ndim == 0:
            return float(self.prefix(int(ja))[int(ja)])
        if ja.size == 0:
            return np.zeros(0)
        return self.prefix(int(ja.max()))[ja]

    def scaled(self, c):
        """The sequence c * w_j for j != 0 (w_0 stays 1)."""
        return WeightSequence(lambda js: c * self._func(js), family="custom", param=None)

    def describe(self):
        if self.param is None:
            return self.family
        return f"{self.family}:{self.param:g}"

    def __repr__(self):
        return f"WeightSequence({self.describe()})"

    @classmethod
    def from_table(cls, values):
        """Custom weights from an explicit table w_0..w_J.

        Indices beyond J raise ``IndexError``.
        """
        table = np.asarray(values, dtype=float)
        if table.ndim != 1 or table.size < 1:
            raise ValueError("weight table must be a non-empty 1-d list")
        if table[0] != 1.0:
            raise ValueError("weight table must start with w_0 = 1")
        if np.any(table <= 0) or not np.all(np.isfinite(table)):
            raise ValueError("weights must be strictly positive and finite")

        def func(js):
            if js.size and js.max() >= table.size:
                raise IndexError(f"weight table defined only up to j = {table.size - 1}")
            return table[js]

        seq = cls(func, family="custom")
        seq._table = table
        return seq


def make_weights(family, param=None):
    """Construct one of the parametric weight families.

    >>> make_weights("sobolev", 1)(3)
    9.0
    """
    if family == "const":
        family, param = "derivative", 0
    if family == "sobolev":
        p = check_real(param, "p")
        if not p > 0.5:
            raise ValueError(f"sobolev weights need p > 1/2, got p = {p}")
        return WeightSequence(lambda js: np.abs(js).astype(float) ** (2 * p), "sobolev", p)
    if family == "derivative":
        s = param
        if isinstance(s, float) and s.is_integer():
            s = int(s)
        if isinstance(s, bool) or not isinstance(s, (int, np.integer)) or s < 0:
            raise ValueError(f"derivative weights need an integer s >= 0, got s = {param!r}")
        s = int(s)
        if s == 0:
            return WeightSequence(lambda js: np.ones(np.shape(js)), "derivative", 0)
        return WeightSequence(lambda js: np.abs(js).astype(float) ** (2 * s), "derivative", s)
    if family == "os":
        a = check_real(param, "a")
        if not a > 0.5:
            raise ValueError(f"os weights need a > 1/2, got a = {a}")
        return WeightSequence(lambda js: np.abs(js).astype(float) ** (-2 * a), "os", a)
    if family == "ss":
        a = check_real(param, "a")
        if not a > 0:
            raise ValueError(f"ss weights need a > 0, got a = {a}")
        return WeightSequence(lambda js: np.exp(-np.abs(js).astype(float) ** (2 * a)), "ss", a)
    raise ValueError(f"unknown weight family {family!r}")


def parse_weights(text):
    """Parse ``family:param`` (or ``const``) into a WeightSequence."""
    text = text.strip()
    if text == "const":
        return make_weights("const")
    family, sep, raw = text.partition(":")
    if not sep:
        raise ValueError(f"expected family:param, got {text!r}")
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"bad weight parameter in {text!r}") from None
    return make_weights(family, value)


def parse_omega(text):
    """Loss weights: ``const`` or ``sobolev:s`` meaning w_j = |j|^(2s)."""
    text = text.strip()
    if text == "const":
        return make_weights("const")
    family, sep, raw = text.partition(":")
    if family != "sobolev" or not sep:
        raise ValueError(f"omega must be 'const' or 'sobolev:s', got {text!r}")
    try:
        s = float(raw)
    except ValueError:
        raise ValueError(f"bad omega order in {text!r}") from None
    return make_weights("derivative", s)


def is_nonincreasing(values):
    values = np.asarray(values, dtype=float)
    return bool(np.all(np.diff(values) <= 0))


@dataclass
class ClassSpec:
    """The pair of classes F_gamma^r (target) and E_lambda^d (error).

    ``omega`` is the loss weight sequence.
    """

    gamma: WeightSequence
    lam: WeightSequence
    omega: WeightSequence
    r: float = 1.0
    d: float = 1.0

    def __post_init__(self):
        self.r = check_real(self.r, "r", minimum=1.0)
        self.d = check_real(self.d, "d", minimum=1.0)

    def check_assumptions(self, K=1000):
        """Check w_0 = 1 and the monotonicity conditions on 1..K.

        Returns a dict of booleans; nothing is raised.
        """
        g, l, o = self.gamma.prefix(K), self.lam.prefix(K), self.omega.prefix(K)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            ratio = o[1:] / g[1:]
        return {
            "unit_at_zero": bool(g[0] == l[0] == o[0] == 1.0),
            "omega_over_gamma_nonincreasing": is_nonincreasing(ratio),
            "lambda_nonincreasing": is_nonincreasing(l[1:]),
        }


def check_class_membership(spec, cls, which):
    """Report whether a spectrum lies in F_gamma^r (``"F"``) or E_lambda^d (``"E"``).

    Only the indices covered by ``spec`` are checked.
    """
    js = spec.indices
    power = np.abs(spec.coeffs) ** 2
    if which == "F":
        norm = float(np.sum(cls.gamma(js) * power))
        return {"which": "F", "norm": norm, "radius": cls.r, "member": norm <= cls.r}
    if which == "E":
        pos = js != 0
        if not np.any(pos):
            return {"which": "E", "min_ratio": None, "max_ratio": None, "member": True,
                    "lower_ok": True, "upper_ok": True, "violations": []}
        ratio = power[pos] / cls.lam(js[pos])
        lo, hi = float(ratio.min()), float(ratio.max())
        lower_ok, upper_ok = lo >= 1.0 / cls.d, hi <= cls.d
        bad = js[pos][(ratio < 1.0 / cls.d) | (ratio > cls.d)]
        return {"which": "E", "min_ratio": lo, "max_ratio": hi, "d": cls.d,
                "lower_ok": lower_ok, "upper_ok": upper_ok,
                "member": lower_ok and upper_ok, "violations": sorted(set(np.abs(bad).tolist()))}
    raise ValueError(f"which must be 'F' or 'E', got {which!r}")


@dataclass
class RateOracleResult:
    n: int
    m: int
    psi_n: float
    k_star: int
    kappa_m: float
    kappa_argmax: int
    search_bound: int
    balance: float = field(default=float("nan"))

    def to_dict(self):
        return {
            "n": self.n, "psi_n": self.psi_n, "k_star": self.k_star,
            "m": self.m, "kappa_m": self.kappa_m, "kappa_argmax": self.kappa_argmax,
            "search_bound": self.search_bound, "balance": self.balance,
        }


def _psi_terms(cls, n, k_max):
    ks = np.arange(1, k_max + 1)
    omega = cls.omega.prefix(k_max)[1:]
    gamma = cls.gamma.prefix(k_max)[1:]
    lam = cls.lam.prefix(k_max)[1:]
    with np.errstate(over="ignore", divide="ignore"):
        bias = omega / gamma
        variance = np.cumsum(2.0 * omega / (n * lam))
    return ks, bias, variance


def rate_oracle(cls, n, m, k_max=None):
    """Compute psi_n, k*, kappa_m by exact discrete search.

    psi_n = min_k max(w_k/g_k, sum_{0<|j|<=k} w_j/(n l_j)) over 1 <= k <= k_max
    and kappa_m = max_j (w_j/g_j) min(1, 1/(m l_j)). Ties go to the smallest
    index. Raises ``PreconditionError("k_max too small")`` when the bias term
    at ``k_max`` still exceeds the variance term.
    """
    n = check_positive_int(n, "n")
    m = check_positive_int(m, "m")
    if k_max is None:
        k_max = min(n, 10**6)
    k_max = check_positive_int(k_max, "k_max")

    ks, bias, variance = _psi_terms(cls, n, k_max)
    if not bias[-1] <= variance[-1]:
        raise PreconditionError(
            f"k_max too small: bias {bias[-1]:.3g} > variance {variance[-1]:.3g} at k = {k_max}")
    objective = np.maximum(bias, variance)
    i = int(np.argmin(objective))
    psi = float(objective[i])
    balance = float(min(bias[i], variance[i]) / psi) if psi > 0 else float("nan")

    kappa, argmax, bound = _kappa(cls, m, k_max)
    return RateOracleResult(n=n, m=m, psi_n=psi, k_star=int(ks[i]), kappa_m=kappa,
                            kappa_argmax=argmax, search_bound=bound, balance=balance)


def _kappa(cls, m, k_max):
    # beyond the first j with m*l_j <= 1 the objective is w_j/g_j, which is
    # non-increasing, so the scan can stop shortly after that index.
    block = 256
    hi = 0
    crossing = None
    while crossing is None and hi < k_max:
        hi = min(k_max, max(2 * hi, block))
        lam = cls.lam.prefix(hi)[1:]
        hit = np.nonzero(m * lam <= 1.0)[0]
        if hit.size:
            crossing = int(hit[0]) + 1
    if crossing is None:
        bound = k_max
    else:
        bound = min(k_max, crossing + max(10, crossing // 10))
    omega = cls.omega.prefix(bound)[1:]
    gamma = cls.gamma.prefix(bound)[1:]
    lam = cls.lam.prefix(bound)[1:]
    with np.errstate(over="ignore", divide="ignore"):
        objective = omega / gamma * np.minimum(1.0, 1.0 / (m * lam))
    i = int(np.argmax(objective))
    return float(objective[i]), i + 1, bound


def rate_prediction(case, p, a, s, n, m):
    """Closed-form minimax rate for Sobolev targets, without constants.

    os: n^(-2(p-s)/(2p+2a+1)) + m^(-min(p-s, a)/a)
    ss: (log n)^(-(p-s)/a) + (log m)^(-(p-s)/a)
    """
    p, a = float(p), float(a)
    if not p > s >= 0:
        raise ValueError(f"need p > s >= 0, got p = {p}, s = {s}")
    if case == "os":
        if not a > 0.5:
            raise ValueError(f"os case needs a > 1/2, got a = {a}")
        return n ** (-2 * (p - s) / (2 * p + 2 * a + 1)) + m ** (-min(p - s, a) / a)
    if case == "ss":
        if not a > 0:
            raise ValueError(f"ss case needs a > 0, got a = {a}")
        if n <= 1 or m <= 1:
            raise ValueError("ss rates need n, m > 1")
        e = (p - s) / a
        return math.log(n) ** (-e) + math.log(m) ** (-e)
    raise ValueError(f"unknown case {case!r}")


def zeta(d):
    """log(3d) / log(3)."""
    return math.log(3 * d) / math.log(3)


def diagnostic_bounds(cls, n, m, N=None, M=None):
    """Lower diagnostic bounds (N_l, M_l, zeta_d) for the data-driven rule.

    N_l is the largest j <= N_n with l_j / (j max(w_j, 1)) >= 4 d log(n) / n,
    M_l the largest j <= M_m with l_j >= 4 d log(m)^2 / m. When no index
    qualifies the bound is reported as 0. ``N`` and ``M`` default to the
    known-rule bounds N_n and M_m.
    """
    if N is None or M is None:
        from .selection import known_bounds
        N0, M0 = known_bounds(cls.omega, cls.lam, cls.d, n, m)
        N = N0 if N is None else N
        M = M0 if M is None else M
    d = cls.d
    js = np.arange(1, N + 1)
    lam = cls.lam.prefix(N)[1:]
    omega = cls.omega.prefix(N)[1:]
    ok = lam / (js * np.maximum(omega, 1.0)) >= 4 * d * math.log(n) / n
    N_l = int(js[ok][-1]) if np.any(ok) else 0
    lam_m = cls.lam.prefix(M)[1:]
    ok_m = lam_m >= 4 * d * math.log(m) ** 2 / m
    M_l = int(np.nonzero(ok_m)[0][-1]) + 1 if np.any(ok_m) else 0
    return N_l, M_l, zeta(d)
