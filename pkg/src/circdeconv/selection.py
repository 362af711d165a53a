"""Penalized choice of the cut-off dimension.

Two rules are provided. ``select_known`` uses a known error-weight sequence
lambda and corridor constant d; ``select_empirical`` uses only the two
samples and the loss weights omega.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_positive_int, check_real
from .deconvolution import contrast_path
from .spectral import empirical_spectrum
from .exceptions import AssumptionWarning, InsufficientRangeError, PreconditionError

KNOWN_PENALTY = 60.0
EMPIRICAL_PENALTY = 600.0


@dataclass
class SelectionTables:
    """Per-k penalty quantities for k = 1..len(delta).

    In ``empirical`` mode ``Delta``, ``tau`` and ``delta`` hold the hatted
    (data-driven) versions and ``N``, ``M`` the estimated bounds; ``N_u`` is
    only set in that mode.
    """

    mode: str
    Delta: np.ndarray
    tau: np.ndarray
    delta: np.ndarray
    N: int
    M: int
    N_u: int = None
    assumption_ok: bool = True
    notes: list = field(default_factory=list)

    @property
    def cap(self):
        return min(self.N, self.M)

    @property
    def ks(self):
        return np.arange(1, self.delta.size + 1)

    def summary(self):
        out = {"mode": self.mode, "N": self.N, "M": self.M, "cap": self.cap,
               "assumption_ok": self.assumption_ok}
        if self.N_u is not None:
            out["N_u"] = self.N_u
        return out


@dataclass
class SelectionResult:
    k_hat: int
    contrast: np.ndarray
    penalty: np.ndarray
    criterion_values: np.ndarray
    search_cap: int
    mode: str
    tables: SelectionTables = None

    def trace_rows(self):
        for k in range(1, self.search_cap + 1):
            i = k - 1
            yield k, float(self.contrast[i]), float(self.penalty[i]), float(self.criterion_values[i])

    def summary(self):
        return {"k_hat": self.k_hat, "cap": self.search_cap, "mode": self.mode}


def _log_penalty(k, Delta, tau, factor):
    ks = np.asarray(k, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        return factor * ks * Delta * np.log(np.maximum(tau, ks + 2.0)) / np.log(ks + 2.0)


def _known_sequences(omega, lam, K):
    w = omega.prefix(K)
    l = lam.prefix(K)
    with np.errstate(over="ignore", divide="ignore"):
        Delta = np.maximum.accumulate(w / l)[1:]
        tau = np.maximum.accumulate(np.maximum(w, 1.0) / l)[1:]
    delta = _log_penalty(np.arange(1, K + 1), Delta, tau, 2.0)
    return Delta, tau, delta


def _check_lambda(lam, K):
    head = lam.prefix(min(K, 16))
    if np.any(head <= 0):
        raise PreconditionError("lambda must be strictly positive")


def _prefix_end(holds, limit, block=1024):
    """Largest K <= limit with holds(j) true for all j <= K (0 if none).

    ``holds(lo, hi)`` returns a boolean array for j = lo..hi. The set of
    valid indices must be a prefix of 1..limit; blocks double in size, so
    the cost is proportional to the answer rather than to ``limit``.
    """
    lo = 1
    while lo <= limit:
        hi = min(limit, lo + block - 1)
        bad = np.nonzero(~holds(lo, hi))[0]
        if bad.size:
            return lo + int(bad[0]) - 1
        lo, block = hi + 1, 2 * block
    return limit


def known_bounds(omega, lam, d, n, m):
    """N_n and M_m of the known-degree rule.

    N_n = max{1 <= N <= n : delta_N / n <= delta_1} and
    M_m = max{1 <= M <= m : m^7 exp(-m l_M / (72 d)) <= (504 d / l_1)^7},
    the latter evaluated in log space. An empty M-set falls back to 1.

    delta_N is non-decreasing and, for non-increasing lambda, so is the
    left side of the M_m inequality; both sets are therefore prefixes and
    are scanned only up to their first failure.
    """
    n = check_positive_int(n, "n")
    m = check_positive_int(m, "m")
    d = check_real(d, "d", minimum=1.0)
    _check_lambda(lam, 1)
    delta_1 = _known_sequences(omega, lam, 1)[2][0]

    def n_holds(lo, hi):
        delta = _known_sequences(omega, lam, hi)[2]
        return delta[lo - 1:] / n <= delta_1

    N = max(1, _prefix_end(n_holds, n))

    log_m = 7.0 * math.log(m)
    rhs = 7.0 * math.log(504.0 * d / lam(1))

    def m_holds(lo, hi):
        l = lam.prefix(hi)[lo:]
        return log_m - m * l / (72.0 * d) <= rhs

    M = max(1, _prefix_end(m_holds, m))
    return N, M


def known_tables(omega, lam, d, n, m, strict=False):
    """Penalty tables for the rule with known (lambda, d).

    Delta_k = max_{|j|<=k} w_j/l_j, tau_k = max_{|j|<=k} max(w_j, 1)/l_j and
    delta_k = 2k Delta_k log(max(tau_k, k+2)) / log(k+2), tabulated for
    k = 1..min(N_n, M_m) + 1.

    The condition min_{1<=j<=M_m} l_j / d >= 2/m is checked; a violation
    warns, or raises ``PreconditionError`` when ``strict``.
    """
    N, M = known_bounds(omega, lam, d, n, m)
    K = min(N, M) + 1
    Delta, tau, delta = _known_sequences(omega, lam, K)
    lam_min = float(np.min(lam.prefix(M)[1:]))
    ok = lam_min / d >= 2.0 / m
    tables = SelectionTables("known", Delta, tau, delta, N=N, M=M, assumption_ok=ok)
    if not ok:
        msg = (f"min lambda_j / d = {lam_min / d:.3g} over j <= M_m = {M} "
               f"is below 2/m = {2.0 / m:.3g}")
        tables.notes.append(msg)
        if strict:
            raise PreconditionError(msg)
        warnings.warn(msg, AssumptionWarning, stacklevel=2)
    return tables


def upper_dimension(omega, n):
    """N_n^u: largest N <= n with max_{0<j<=N} w_j / n <= 1 (at least 1)."""
    n = check_positive_int(n, "n")
    w = np.maximum.accumulate(omega.prefix(n)[1:])
    ok = np.nonzero(w <= n)[0]
    return int(ok[-1]) + 1 if ok.size else 1


def empirical_bounds(phi_hat, omega, n, m):
    """Estimated bounds (N_hat, M_hat, N_u) as first threshold crossings.

    N_hat = min{1 <= j <= N_u : |phi_j|^2 / (j max(w_j, 1)) < log(n)/n},
    M_hat = min{1 <= j <= m : |phi_j|^2 < log(m)^2 / m}; each falls back to
    the upper end of its range when nothing crosses. ``phi_hat`` only needs
    to reach the crossing, but raises ``InsufficientRangeError`` if it ends
    before both the crossing and the range end.
    """
    n = check_positive_int(n, "n")
    m = check_positive_int(m, "m")
    N_u = upper_dimension(omega, n)
    K = phi_hat.max_index
    p2 = np.abs(phi_hat.nonnegative()[1:]) ** 2
    js = np.arange(1, K + 1)

    def first_crossing(mask, end):
        hit = np.nonzero(mask[:end])[0]
        if hit.size:
            return int(hit[0]) + 1
        if K >= end:
            return end
        raise InsufficientRangeError(
            f"phi_hat covers |j| <= {K}; no crossing found and range ends at {end}")

    lim = min(K, N_u)
    stat = p2[:lim] / (js[:lim] * np.maximum(omega.prefix(lim)[1:], 1.0))
    N_hat = first_crossing(stat < math.log(n) / n, N_u)
    M_hat = first_crossing(p2 < math.log(m) ** 2 / m, m)
    return N_hat, M_hat, N_u


def empirical_error_spectrum(eps, omega, n, m, start=32):
    """Empirical spectrum of ``eps`` long enough to locate both crossings.

    The coverage doubles from ``start`` until ``empirical_bounds`` succeeds,
    so only O(m * crossing) work is done instead of O(m * min(N_u, m)).
    """
    K = max(1, int(start))
    while True:
        phi_hat = empirical_spectrum(eps, K)
        try:
            empirical_bounds(phi_hat, omega, n, m)
            return phi_hat
        except InsufficientRangeError:
            if K >= max(n, m):
                raise
            K *= 2


def empirical_tables(phi_hat, omega, n, m):
    """Data-driven penalty tables.

    hat_Delta_k = max_{|j|<=k} w_j |phi_j|^-2 1{|phi_j|^2 >= 1/m} (the j = 0
    term is 1), hat_tau_k likewise with max(w_j, 1), and
    hat_delta_k = k hat_Delta_k log(max(hat_tau_k, k+2)) / log(k+2).
    Note the factor k here against 2k in the known rule.
    """
    N_hat, M_hat, N_u = empirical_bounds(phi_hat, omega, n, m)
    K = min(N_hat, M_hat, phi_hat.max_index)
    phi = phi_hat.nonnegative()[:K + 1]
    p2 = np.abs(phi) ** 2
    keep = p2 >= 1.0 / m
    keep[0] = True
    w = omega.prefix(K)
    with np.errstate(divide="ignore"):
        ratio = np.where(keep, w / np.where(keep, p2, 1.0), 0.0)
        ratio_tau = np.where(keep, np.maximum(w, 1.0) / np.where(keep, p2, 1.0), 0.0)
    Delta = np.maximum.accumulate(ratio)[1:]
    tau = np.maximum.accumulate(ratio_tau)[1:]
    delta = _log_penalty(np.arange(1, K + 1), Delta, tau, 1.0)
    return SelectionTables("empirical", Delta, tau, delta, N=N_hat, M=M_hat, N_u=N_u)


def _select(g_hat, phi_hat, m, omega, penalty, tables, mode):
    cap = tables.cap
    if cap < 1:
        raise RuntimeError("internal error: search cap below 1")
    have = min(g_hat.max_index, phi_hat.max_index)
    if have < cap:
        raise InsufficientRangeError(f"spectra cover |j| <= {have}, selection needs {cap}")
    contrast = contrast_path(g_hat, phi_hat, m, cap, omega)
    pen = penalty[:cap]
    crit = -contrast + pen
    k_hat = int(np.argmin(crit)) + 1
    return SelectionResult(k_hat=k_hat, contrast=contrast, penalty=pen,
                           criterion_values=crit, search_cap=cap, mode=mode, tables=tables)


def select_known(g_hat, phi_hat, m, n, omega, lam, d, penalty_const=KNOWN_PENALTY, strict=False):
    """k_hat = argmin_{1<=k<=N_n^M_m} -||f_k||_w^2 + C d delta_k / n (C = 60)."""
    tables = known_tables(omega, lam, d, n, m, strict=strict)
    penalty = penalty_const * float(d) * tables.delta / n
    return _select(g_hat, phi_hat, m, omega, penalty, tables, "known")


def select_empirical(g_hat, phi_hat, n, m, omega, penalty_const=EMPIRICAL_PENALTY):
    """k_hat = argmin_{1<=k<=N_hat^M_hat} -||f_k||_w^2 + C hat_delta_k / n (C = 600)."""
    tables = empirical_tables(phi_hat, omega, n, m)
    penalty = penalty_const * tables.delta / n
    return _select(g_hat, phi_hat, m, omega, penalty, tables, "empirical")
