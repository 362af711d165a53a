"""Monte Carlo harness: circular test densities, risk estimation, rate fits.

Each replication draws X from the target model and two independent error
samples from the noise model, forms Y = X + eps mod 1, estimates, and
scores the estimate by its exact weighted risk against the model's
closed-form coefficients.
"""

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_positive_int, check_real
from .deconvolution import deconvolve, exact_risk
from .exceptions import DataFormatError, ReplicationError
from .selection import (EMPIRICAL_PENALTY, KNOWN_PENALTY, empirical_bounds,
                        empirical_error_spectrum, known_tables, select_empirical, select_known)
from .spectral import CircularSample, SpectralVector, empirical_spectrum, evaluate, synthesize
from .weights import WeightSequence, parse_omega, parse_weights

_TWO_PI = 2.0 * np.pi
MODEL_KINDS = ("trig_poly", "wrapped_laplace", "wrapped_normal")
MODES = ("fixed", "oracle_k", "known", "empirical")


@dataclass(frozen=True)
class DensityModel:
    """A circular density with closed-form Fourier coefficients.

    ``trig_poly``
        c_j given explicitly for 1 <= j <= J (``coeffs``), zero beyond.
    ``wrapped_laplace``
        sigma * (G1 - G2) mod 1 with G1, G2 iid Gamma(shape, 1);
        c_j = (1 + sigma^2 (2 pi j)^2)^(-shape). ``shape=1`` is the Laplace
        law; ``shape=0.5`` gives |c_j| ~ 1/|j|.
    ``wrapped_normal``
        N(0, sigma^2) mod 1; c_j = exp(-2 pi^2 sigma^2 j^2).
    """

    kind: str
    coeffs: tuple = ()
    sigma: float = None
    shape: float = 1.0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise DataFormatError(f"unknown model kind {self.kind!r}")
        if self.kind == "trig_poly":
            object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
            vals = synthesize(self.spectrum(self.degree), 4096)
            if vals.min() < 0:
                raise DataFormatError(
                    f"trig_poly density negative on grid (min {vals.min():.3g})")
        else:
            check_real(self.sigma, "sigma", minimum=0.0, strict=True)
            check_real(self.shape, "shape", minimum=0.0, strict=True)

    @property
    def degree(self):
        return len(self.coeffs)

    def coefficient(self, j):
        """Exact coefficients at integer index (or array) j."""
        j = np.asarray(j)
        ja = np.abs(j)
        if self.kind == "trig_poly":
            table = np.concatenate([[1.0 + 0j], np.asarray(self.coeffs, dtype=complex)])
            out = np.zeros(ja.shape, dtype=complex)
            inside = ja <= self.degree
            out[inside] = table[ja[inside]]
            out = np.where(j < 0, np.conj(out), out)
            return out if out.ndim else complex(out)
        jf = ja.astype(float)
        if self.kind == "wrapped_laplace":
            out = (1.0 + (self.sigma * _TWO_PI * jf) ** 2) ** (-self.shape)
        else:
            out = np.exp(-2.0 * np.pi ** 2 * self.sigma ** 2 * jf ** 2)
        out = out.astype(complex)
        return out if out.ndim else complex(out)

    def spectrum(self, K):
        return SpectralVector(self.coefficient(np.arange(-K, K + 1)))

    def tail_norm_sq(self, omega, K):
        """sum_{|j|>K} w_j |c_j|^2, for omega of the form |j|^(2s) or custom."""
        if self.kind == "trig_poly":
            if K >= self.degree:
                return 0.0
            js = np.arange(K + 1, self.degree + 1)
            return float(2.0 * np.sum(omega(js) * np.abs(self.coefficient(js)) ** 2))
        block = 1 << 16
        total = 0.0
        start = K + 1
        for _ in range(64):
            js = np.arange(start, start + block)
            with np.errstate(under="ignore"):
                terms = 2.0 * omega(js) * np.abs(self.coefficient(js)) ** 2
            total += float(np.sum(terms))
            start += block
            if terms[-1] <= 1e-18 * max(total, 1e-300):
                return total
        if self.kind == "wrapped_laplace":
            s = _omega_order(omega)
            power = None if s is None else 2 * s - 4 * self.shape
            if power is not None and power < -1:
                c = (self.sigma * _TWO_PI) ** (-4 * self.shape)
                return total + 2.0 * c * start ** (power + 1) / (-(power + 1))
        raise ValueError("tail bias unbounded")

    def density(self, grid_size):
        """Density on x_t = t / grid_size (trig_poly only; wrapped models
        are evaluated from a long truncated series)."""
        if self.kind == "trig_poly":
            return synthesize(self.spectrum(self.degree), grid_size)
        K = 4096
        return synthesize(self.spectrum(K), grid_size)

    def bin_probabilities(self, bins, K=None):
        """Probabilities of the equal-width bins [b/bins, (b+1)/bins)."""
        if K is None:
            K = self.degree if self.kind == "trig_poly" else 20000
        js = np.arange(1, K + 1)
        c = self.coefficient(js)
        edges = np.arange(bins + 1) / bins
        # antiderivative of sum_j c_j e^{-i 2 pi j x}: x + sum_j 2 Re(c_j (e^{-i2pi j x} - 1)/(-i 2 pi j))
        phase = np.exp(-1j * _TWO_PI * np.outer(edges, js))
        F = edges + 2.0 * np.real((phase - 1.0) @ (c / (-1j * _TWO_PI * js)))
        return np.diff(F)

    def max_density(self):
        if self.kind != "trig_poly":
            return math.inf
        return float(synthesize(self.spectrum(self.degree), 4096).max())

    def sample(self, count, rng):
        count = check_positive_int(count, "count")
        if self.kind == "wrapped_normal":
            return np.mod(rng.normal(0.0, self.sigma, size=count), 1.0) % 1.0
        if self.kind == "wrapped_laplace":
            if self.shape == 1.0:
                raw = rng.laplace(0.0, self.sigma, size=count)
            else:
                raw = self.sigma * (rng.gamma(self.shape, 1.0, size=count)
                                    - rng.gamma(self.shape, 1.0, size=count))
            return np.mod(raw, 1.0) % 1.0
        bound = self.max_density() * 1.01
        if 1.0 / bound < 0.01:
            raise ValueError("density too peaked for rejection sampling")
        spec = self.spectrum(self.degree)
        out = np.empty(count)
        filled = 0
        while filled < count:
            want = int((count - filled) * bound * 1.1) + 16
            x = rng.random(want)
            u = rng.random(want)
            acc = x[u * bound <= evaluate(spec, x)]
            take = min(acc.size, count - filled)
            out[filled:filled + take] = acc[:take]
            filled += take
        return out

    def to_dict(self):
        if self.kind == "trig_poly":
            return {"kind": "trig_poly",
                    "coeffs": [[c.real, c.imag] if c.imag else c.real for c in self.coeffs]}
        out = {"kind": self.kind, "sigma": self.sigma}
        if self.kind == "wrapped_laplace":
            out["shape"] = self.shape
        return out

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        kind = data.pop("kind", None)
        if kind == "trig_poly":
            if "coeffs" in data:
                coeffs = [complex(*c) if isinstance(c, (list, tuple)) else complex(c)
                          for c in data["coeffs"]]
                return cls("trig_poly", tuple(coeffs))
            return smooth_trig_poly(**data)
        if kind == "wrapped_laplace":
            return cls("wrapped_laplace", sigma=float(data["sigma"]),
                       shape=float(data.get("shape", 1.0)))
        if kind == "wrapped_normal":
            return cls("wrapped_normal", sigma=float(data["sigma"]))
        raise DataFormatError(f"unknown model kind {kind!r}")


def _omega_order(omega):
    if omega.family == "derivative":
        return omega.param
    return None


def smooth_trig_poly(q=2.0, J=25, min_density=0.05):
    """Trig polynomial with c_j = kappa (1+|j|)^-q for 1 <= |j| <= J.

    kappa is set so the minimum of the density on a 4096-grid equals
    ``min_density``; since the density is 1 + kappa h(x), that minimum is
    1 + kappa min h and kappa has a closed form.
    """
    js = np.arange(1, J + 1)
    base = (1.0 + js) ** (-float(q))
    h = synthesize(SpectralVector.from_nonnegative(np.concatenate([[0.0], base])), 4096)
    lo = float(h.min())
    if lo >= 0:
        raise ValueError("shape function is nonnegative; density cannot reach min_density")
    kappa = (1.0 - min_density) / (-lo)
    return DensityModel("trig_poly", tuple(kappa * base))


def wrapped_laplace(sigma, shape=1.0):
    return DensityModel("wrapped_laplace", sigma=float(sigma), shape=float(shape))


def wrapped_normal(sigma):
    return DensityModel("wrapped_normal", sigma=float(sigma))


def sample(model, count, rng_seed):
    """Draw ``count`` iid points from ``model`` as a CircularSample."""
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else make_rng(rng_seed)
    return CircularSample(model.sample(count, rng))


def make_rng(seed, replication=0):
    """Counter-based Philox stream keyed by seed XOR replication index."""
    return np.random.Generator(np.random.Philox(int(seed) ^ int(replication)))


def draw_observations(f_model, phi_model, n, m, rng):
    """(Y, eps) with Y = X + eps' mod 1 and an independent error sample eps."""
    x = f_model.sample(n, rng)
    noise = phi_model.sample(n, rng)
    y = np.mod(x + noise, 1.0) % 1.0
    eps = phi_model.sample(m, rng)
    return CircularSample(y), CircularSample(eps)


def resolve_m(n, m=None, m_rule=None):
    if m_rule is None:
        return int(m) if m is not None else int(n)
    if m_rule == "n":
        return int(n)
    if isinstance(m_rule, dict) and "power" in m_rule:
        value = float(n) ** float(m_rule["power"])
        # guard against n^(1/4) landing a hair above an integer
        return max(1, int(math.ceil(value - 1e-9)))
    raise DataFormatError(f"unknown m_rule {m_rule!r}")


@dataclass
class ExperimentConfig:
    f_model: DensityModel
    phi_model: DensityModel
    n: int
    m: int = None
    m_rule: object = None
    omega: str = "const"
    s: int = 0
    mode: str = "empirical"
    replications: int = 100
    seed: int = 0
    k: int = None
    lam: str = None
    d: float = None
    penalty_const: float = None
    oracle_k_max: int = 30
    tail_bound: int = None

    def __post_init__(self):
        self.n = check_positive_int(self.n, "n", minimum=2)
        self.m = resolve_m(self.n, self.m, self.m_rule)
        if self.m < 1:
            raise DataFormatError("m must be >= 1")
        self.replications = check_positive_int(self.replications, "replications")
        self.seed = int(self.seed)
        if self.mode not in MODES:
            raise DataFormatError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "fixed" and self.k is None:
            raise DataFormatError("fixed mode needs k")
        if self.mode == "known" and (self.lam is None or self.d is None):
            raise DataFormatError("known mode needs lambda and d")
        self.oracle_k_max = check_positive_int(self.oracle_k_max, "oracle_k_max")

    @property
    def omega_weights(self):
        if isinstance(self.omega, dict):
            return WeightSequence.from_table(self.omega["table"])
        return parse_omega(self.omega)

    @property
    def lambda_weights(self):
        return parse_weights(self.lam)

    def with_updates(self, **changes):
        data = self.to_dict()
        data.update(changes)
        return ExperimentConfig.from_dict(data)

    def to_dict(self):
        return {
            "f_model": self.f_model.to_dict(),
            "phi_model": self.phi_model.to_dict(),
            "n": self.n, "m": self.m, "m_rule": self.m_rule, "omega": self.omega, "s": self.s,
            "mode": self.mode, "replications": self.replications, "seed": self.seed,
            "k": self.k, "lambda": self.lam, "d": self.d,
            "penalty_const": self.penalty_const, "oracle_k_max": self.oracle_k_max,
            "tail_bound": self.tail_bound,
        }

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        known = {"f_model", "phi_model", "n", "m", "m_rule", "omega", "s", "mode",
                 "replications", "seed", "k", "lambda", "d", "penalty_const",
                 "oracle_k_max", "tail_bound"}
        unknown = set(data) - known
        if unknown:
            raise DataFormatError(f"unknown config keys: {sorted(unknown)}")
        for key in ("f_model", "phi_model", "n"):
            if key not in data:
                raise DataFormatError(f"config is missing {key!r}")
        try:
            return cls(
                f_model=data["f_model"] if isinstance(data["f_model"], DensityModel)
                else DensityModel.from_dict(data["f_model"]),
                phi_model=data["phi_model"] if isinstance(data["phi_model"], DensityModel)
                else DensityModel.from_dict(data["phi_model"]),
                n=data["n"], m=data.get("m"), m_rule=data.get("m_rule"),
                omega=data.get("omega", "const"), s=int(data.get("s", 0)),
                mode=data.get("mode", "empirical"),
                replications=data.get("replications", 100), seed=data.get("seed", 0),
                k=data.get("k"), lam=data.get("lambda"), d=data.get("d"),
                penalty_const=data.get("penalty_const"),
                oracle_k_max=data.get("oracle_k_max", 30), tail_bound=data.get("tail_bound"),
            )
        except DataFormatError:
            raise
        except (TypeError, ValueError, KeyError) as exc:
            raise DataFormatError(f"invalid config: {exc}") from exc


@dataclass
class RiskReport:
    risks: np.ndarray
    k_hats: np.ndarray
    fixed_k_mean_risk: np.ndarray
    config: dict
    mean: float = field(init=False)
    stderr: float = field(init=False)

    def __post_init__(self):
        self.risks = np.asarray(self.risks, dtype=float)
        self.k_hats = np.asarray(self.k_hats, dtype=int)
        self.mean = float(np.mean(self.risks))
        R = self.risks.size
        self.stderr = float(np.std(self.risks, ddof=1) / math.sqrt(R)) if R > 1 else 0.0

    @property
    def n(self):
        return self.config["n"]

    @property
    def replications(self):
        return int(self.risks.size)

    @property
    def k_hat_histogram(self):
        ks, counts = np.unique(self.k_hats, return_counts=True)
        return {int(k): int(c) for k, c in zip(ks, counts)}

    @property
    def oracle_k(self):
        return int(np.argmin(self.fixed_k_mean_risk)) + 1

    @property
    def oracle_mean_risk(self):
        return float(np.min(self.fixed_k_mean_risk))

    def to_dict(self):
        return {
            "config": self.config,
            "mean_risk": self.mean,
            "stderr": self.stderr,
            "replications": self.replications,
            "k_hat_histogram": {str(k): v for k, v in self.k_hat_histogram.items()},
            "oracle_k": self.oracle_k,
            "oracle_mean_risk": self.oracle_mean_risk,
            "fixed_k_mean_risk": [float(r) for r in self.fixed_k_mean_risk],
            "risks": [float(r) for r in self.risks],
            "k_hats": [int(k) for k in self.k_hats],
        }


def _fixed_k_risks(g_hat, phi_hat, m, truth_half, omega, k_max, tail):
    """Risk of the cut-off estimate for every k = 1..k_max, vectorized."""
    g = g_hat.nonnegative()[1:k_max + 1]
    phi = phi_hat.nonnegative()[1:k_max + 1]
    f = truth_half[1:]
    w = omega.prefix(f.size)[1:]
    keep = np.abs(phi) ** 2 >= 1.0 / m
    est = np.zeros(k_max, dtype=complex)
    est[keep] = g[keep] / phi[keep]
    included = 2.0 * w[:k_max] * np.abs(est - f[:k_max]) ** 2
    excluded = 2.0 * w * np.abs(f) ** 2
    tail_after = np.cumsum(excluded[::-1])[::-1]  # tail_after[i] = sum_{j>=i+1}
    beyond = np.append(tail_after[1:], 0.0)  # sum over j > i+1
    return np.cumsum(included) + beyond[:k_max] + tail


def _prepare(cfg, rep, shared):
    """Draw one replication's data and the spectra every mode needs."""
    omega = shared["omega"]
    rng = make_rng(cfg.seed, rep)
    y, eps = draw_observations(cfg.f_model, cfg.phi_model, cfg.n, cfg.m, rng)
    n, m = cfg.n, cfg.m
    K = cfg.oracle_k_max
    if cfg.mode == "fixed":
        K = max(K, cfg.k)
    if cfg.mode == "known":
        K = max(K, shared["known_cap"])
    if cfg.mode == "empirical":
        phi_hat = empirical_error_spectrum(eps, omega, n, m, start=K)
        N_hat, M_hat, _ = empirical_bounds(phi_hat, omega, n, m)
        K = max(K, min(N_hat, M_hat))
        if phi_hat.max_index < K:
            phi_hat = empirical_spectrum(eps, K)
    else:
        phi_hat = empirical_spectrum(eps, K)
    g_hat = empirical_spectrum(y, K)
    return g_hat, phi_hat


def _select_k(cfg, shared, g_hat, phi_hat, penalty_const):
    omega = shared["omega"]
    if cfg.mode == "fixed":
        return cfg.k
    if cfg.mode == "known":
        pc = KNOWN_PENALTY if penalty_const is None else penalty_const
        return select_known(g_hat, phi_hat, cfg.m, cfg.n, omega, shared["lam"], cfg.d,
                            penalty_const=pc).k_hat
    if cfg.mode == "empirical":
        pc = EMPIRICAL_PENALTY if penalty_const is None else penalty_const
        return select_empirical(g_hat, phi_hat, cfg.n, cfg.m, omega, penalty_const=pc).k_hat
    return None


def _score(cfg, shared, g_hat, phi_hat, ks):
    """Exact risks at each k in ``ks`` (None entries give None) and the fixed-k curve."""
    omega = shared["omega"]
    T = shared["tail_bound"]
    top = max([k for k in ks if k is not None], default=0)
    if top > T:
        T = 4 * top
    truth = cfg.f_model.spectrum(T)
    tail = cfg.f_model.tail_norm_sq(omega, T)
    curve = _fixed_k_risks(g_hat, phi_hat, cfg.m, truth.nonnegative(), omega,
                           cfg.oracle_k_max, tail)
    risks = []
    for k in ks:
        if k is None:
            risks.append(None)
            continue
        est = deconvolve(g_hat, phi_hat, cfg.m, k)
        risks.append(exact_risk(est, truth, omega, T, tail=tail))
    return risks, curve


def _replication(cfg, rep, shared):
    g_hat, phi_hat = _prepare(cfg, rep, shared)
    k = _select_k(cfg, shared, g_hat, phi_hat, cfg.penalty_const)
    (risk,), curve = _score(cfg, shared, g_hat, phi_hat, [k])
    return k, risk, curve


def _run_chunk(args):
    cfg_dict, reps = args
    cfg = ExperimentConfig.from_dict(cfg_dict)
    shared = _shared_state(cfg)
    return [_safe_replication(cfg, r, shared) for r in reps]


def _safe_replication(cfg, rep, shared):
    try:
        return _replication(cfg, rep, shared)
    except Exception as exc:
        raise ReplicationError(
            f"replication {rep} failed (seed {cfg.seed}, stream {cfg.seed ^ rep}): {exc}",
            seed=cfg.seed, replication=rep) from exc


def _shared_state(cfg):
    omega = cfg.omega_weights
    shared = {"omega": omega, "tail_bound": max(cfg.tail_bound or 200, cfg.oracle_k_max)}
    if cfg.mode == "known":
        shared["lam"] = cfg.lambda_weights
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            shared["known_cap"] = known_tables(omega, shared["lam"], cfg.d, cfg.n, cfg.m).cap
    return shared


def run_experiment(cfg, jobs=1):
    """Run all replications of ``cfg`` and aggregate a RiskReport.

    Replication r uses the Philox stream keyed by ``seed ^ r``; results are
    reduced in replication order, so the report does not depend on ``jobs``.
    In ``oracle_k`` mode the per-replication risk is taken at the fixed k
    with the smallest mean risk across replications.
    """
    reps = list(range(cfg.replications))
    if jobs and jobs > 1 and cfg.replications > 1:
        chunks = [reps[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, [(cfg.to_dict(), c) for c in chunks]))
        by_rep = {}
        for chunk, part in zip(chunks, parts):
            for r, res in zip(chunk, part):
                by_rep[r] = res
        results = [by_rep[r] for r in reps]
    else:
        shared = _shared_state(cfg)
        results = [_safe_replication(cfg, r, shared) for r in reps]

    curves = np.array([c for _, _, c in results])
    fixed_mean = curves.mean(axis=0)
    if cfg.mode == "oracle_k":
        k_or = int(np.argmin(fixed_mean)) + 1
        k_hats = np.full(len(results), k_or)
        risks = curves[:, k_or - 1]
    else:
        k_hats = np.array([k for k, _, _ in results])
        risks = np.array([r for _, r, _ in results])
    return RiskReport(risks=risks, k_hats=k_hats, fixed_k_mean_risk=fixed_mean,
                      config=cfg.to_dict())


def rate_regression(reports, risks=None, scale="log"):
    """Ordinary least squares of log(mean risk) on log(n).

    ``reports`` is a list of RiskReport, or a sequence of n values with the
    matching ``risks``. ``scale="loglog"`` regresses on log(log n) instead,
    for the logarithmic rates of super smooth noise. Returns
    ``(slope, intercept, r2)``.
    """
    if risks is None:
        ns = [r.n for r in reports]
        risks = [r.mean for r in reports]
    else:
        ns = list(reports)
    ns = np.asarray(ns, dtype=float)
    risks = np.asarray(risks, dtype=float)
    if ns.size < 4 or ns.size != risks.size:
        raise ValueError("degenerate grid: need at least 4 matched (n, risk) points")
    if np.any(np.diff(ns) <= 0):
        raise ValueError("degenerate grid: n values must be strictly increasing")
    if np.any(risks <= 0):
        raise ValueError("degenerate grid: risks must be positive")
    if scale == "log":
        x = np.log(ns)
    elif scale == "loglog":
        if np.any(ns <= math.e):
            raise ValueError("loglog scale needs n > e")
        x = np.log(np.log(ns))
    else:
        raise ValueError(f"unknown scale {scale!r}")
    y = np.log(risks)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), float(r2)


def regress_transformed(ns, risks, exponent):
    """Fit risk = a + b (log n)^(-exponent); returns (b, a, r2)."""
    x = np.log(np.asarray(ns, dtype=float)) ** (-float(exponent))
    y = np.asarray(risks, dtype=float)
    b, a = np.polyfit(x, y, 1)
    resid = y - (b * x + a)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(b), float(a), float(r2)


def calibrate_penalty(cfg, constants, n_grid, m_rule="n", replications=None, seed=None):
    """Pick a penalty constant by simulation.

    For every n in ``n_grid`` and every replication, the data are drawn once
    and the rule in ``cfg.mode`` ("known" or "empirical") is run with each
    candidate constant. The score of a constant is the average over the grid
    of (mean risk at the selected k) / (smallest mean risk over fixed k).
    Use a ``seed`` different from the evaluation runs.

    Returns ``(best_constant, table)`` where ``table[c]`` lists the per-n
    ratios.
    """
    if cfg.mode not in ("known", "empirical"):
        raise ValueError("calibration needs an adaptive mode")
    constants = [float(c) for c in constants]
    table = {c: [] for c in constants}
    for n in n_grid:
        overrides = {"n": int(n), "m_rule": m_rule}
        if replications is not None:
            overrides["replications"] = replications
        if seed is not None:
            overrides["seed"] = seed
        c_cfg = cfg.with_updates(**overrides)
        shared = _shared_state(c_cfg)
        sums = np.zeros(len(constants))
        curve_sum = 0.0
        for rep in range(c_cfg.replications):
            g_hat, phi_hat = _prepare(c_cfg, rep, shared)
            ks = [_select_k(c_cfg, shared, g_hat, phi_hat, c) for c in constants]
            risks, curve = _score(c_cfg, shared, g_hat, phi_hat, ks)
            sums += np.array(risks)
            curve_sum = curve_sum + curve
        oracle = float(np.min(curve_sum)) / c_cfg.replications
        for c, total in zip(constants, sums):
            table[c].append(total / c_cfg.replications / oracle)
    best = min(constants, key=lambda c: (np.mean(table[c]), c))
    return best, table
