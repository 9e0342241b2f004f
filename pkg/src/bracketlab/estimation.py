"""Inference for censored price-list data.

Covers the full pipeline run on elicited reservation wages: cell
summaries, tie-corrected rank-sum tests with an exact-enumeration
oracle, the nonlinear least-squares estimator of the bracketing weight
kappa with a profile-grid oracle, a right-censored Tobit likelihood,
two-sample power calculations, and a plain least-squares convenience.
Censored observations carry the 4.25 code everywhere, matching how the
summary tables treat the upper bound.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.special import ndtr, ndtri
from scipy.stats import norm, rankdata

from .agents import CENSOR_CODE
from .design import Scenario, Treatment
from .experiment import Dataset, iter_observations

__all__ = [
    "CellSummary",
    "MwuResult",
    "KappaFit",
    "TobitFit",
    "OlsFit",
    "EmptySample",
    "TooLarge",
    "Degenerate",
    "NotConverged",
    "AllCensored",
    "RankDeficient",
    "InvalidParams",
    "summarize_means",
    "mwu_test",
    "mwu_exact",
    "nls_kappa",
    "kappa_profile_oracle",
    "tobit_right",
    "power_two_sample",
    "ols",
]

_GRAD_TOL = 1e-8
_STEP_TOL = 1e-10
_MAX_ITER = 500


class EmptySample(Exception):
    """A test was fed an empty sample."""


class TooLarge(Exception):
    """Exact enumeration is limited to 14 pooled observations."""


class Degenerate(Exception):
    """kappa is not identified on this data."""


class NotConverged(Exception):
    """An iterative fit ran out of iterations."""


class AllCensored(Exception):
    """Tobit needs at least one uncensored response."""


class RankDeficient(Exception):
    """The covariate matrix does not have full column rank."""


class InvalidParams(Exception):
    """Power-analysis inputs outside their domain."""


@dataclass(frozen=True)
class CellSummary:
    treatment: Treatment
    scenario: Scenario
    mean: float
    sd: float
    share_censored: float
    n: int

    def __post_init__(self) -> None:
        if self.n < 0 or not 0.0 <= self.share_censored <= 1.0:
            raise ValueError("invalid cell summary")


@dataclass(frozen=True)
class MwuResult:
    """Normal-approximation rank-sum test with midranks."""

    w: float
    z: float
    p: float
    tie_corrected: bool
    continuity: bool

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


@dataclass(frozen=True)
class KappaFit:
    """Saturated cell-means regression with a shared bracketing weight.

    b_s and n_s index scenarios (S1, S2). The mid treatment's fitted
    cell is (1 - kappa) * b_s + kappa * n_s by construction. Reported
    standard errors are heteroskedasticity-robust; se_kappa_model is
    the classical one, kept for diagnostics.
    """

    b_s: tuple[float, float]
    n_s: tuple[float, float]
    se_b_s: tuple[float, float]
    se_n_s: tuple[float, float]
    kappa: float
    se_kappa: float
    se_kappa_model: float
    iterations: int
    converged: bool
    rss: float
    n_obs: int

    def fitted_mid(self, scenario_index: int) -> float:
        return (1.0 - self.kappa) * self.b_s[scenario_index] + self.kappa * self.n_s[scenario_index]


@dataclass(frozen=True)
class TobitFit:
    beta: tuple[float, ...]
    se: tuple[float, ...]
    sigma: float
    se_sigma: float
    loglik: float
    n_censored: int
    n_uncensored: int
    iterations: int

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if not math.isfinite(self.loglik):
            raise ValueError("log-likelihood must be finite")


@dataclass(frozen=True)
class OlsFit:
    beta: tuple[float, ...]
    se: tuple[float, ...]
    sigma2: float
    n_obs: int


def summarize_means(dataset: Dataset, drop_inconsistent: bool = True) -> list[CellSummary]:
    """Mean, spread, censoring share, and N per treatment x scenario.

    Cells with no observations after filtering are omitted; censored
    responses enter the mean at the 4.25 code.
    """
    cells: dict[tuple[Treatment, Scenario], list[float]] = {}
    for record, outcome in iter_observations(dataset, drop_inconsistent):
        cells.setdefault((record.treatment, outcome.scenario), []).append(outcome.res_wage)
    out = []
    for treatment in Treatment:
        for scenario in Scenario:
            wages = cells.get((treatment, scenario))
            if not wages:
                continue
            arr = np.asarray(wages, dtype=float)
            sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
            out.append(
                CellSummary(
                    treatment=treatment,
                    scenario=scenario,
                    mean=float(arr.mean()),
                    sd=sd,
                    share_censored=float((arr >= CENSOR_CODE - 1e-9).mean()),
                    n=int(arr.size),
                )
            )
    return out


def _rank_setup(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size == 0 or y.size == 0:
        raise EmptySample("both samples must be nonempty")
    pooled = np.concatenate([x, y])
    ranks = rankdata(pooled)
    return x.size, y.size, pooled, ranks


def mwu_test(x, y, continuity: bool = False) -> MwuResult:
    """Two-sided rank-sum test via the tie-corrected normal approximation.

    W is the midrank sum of the first sample. The optional continuity
    correction shrinks W - E[W] by 0.5 toward zero; it is off by
    default. Zero variance (all values tied) gives z = 0, p = 1.
    """
    n1, n2, pooled, ranks = _rank_setup(x, y)
    n_total = n1 + n2
    w = float(ranks[:n1].sum())
    expected = n1 * (n_total + 1) / 2.0
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float((counts.astype(float) ** 3 - counts).sum()) / (n_total * (n_total - 1))
    var = n1 * n2 / 12.0 * ((n_total + 1) - tie_term)
    tie_corrected = bool((counts > 1).any())
    if var <= 0.0:
        return MwuResult(w, 0.0, 1.0, tie_corrected, continuity)
    delta = w - expected
    if continuity and delta != 0.0:
        delta -= math.copysign(0.5, delta)
    z = delta / math.sqrt(var)
    p = float(2.0 * ndtr(-abs(z)))
    return MwuResult(w, z, min(p, 1.0), tie_corrected, continuity)


def mwu_exact(x, y) -> float:
    """Exact two-sided p by enumerating group assignments of the pooled data.

    p = P(|W - E[W]| >= |w_obs - E[W]|) over all (n1+n2 choose n1)
    relabelings of the observed pooled multiset.
    """
    n1, n2, _, ranks = _rank_setup(x, y)
    n_total = n1 + n2
    if n_total > 14:
        raise TooLarge(f"exact enumeration capped at 14 pooled observations, got {n_total}")
    expected = n1 * (n_total + 1) / 2.0
    w_obs = float(ranks[:n1].sum())
    threshold = abs(w_obs - expected) - 1e-9
    hits = 0
    total = 0
    for idx in itertools.combinations(range(n_total), n1):
        total += 1
        if abs(ranks[list(idx)].sum() - expected) >= threshold:
            hits += 1
    return hits / total


_SCENARIOS = (Scenario.S1, Scenario.S2)


def _kappa_arrays(dataset: Dataset, broad_label: Treatment, narrow_label: Treatment, mid_label: Treatment):
    """Responses with group/scenario codes, consistent scenarios only."""
    labels = {broad_label: 0, narrow_label: 1, mid_label: 2}
    if len(labels) != 3:
        raise ValueError("the three treatment labels must be distinct")
    y, group, scen = [], [], []
    for record, outcome in iter_observations(dataset, drop_inconsistent=True):
        if record.treatment not in labels:
            continue
        y.append(outcome.res_wage)
        group.append(labels[record.treatment])
        scen.append(_SCENARIOS.index(outcome.scenario))
    y = np.asarray(y, dtype=float)
    group = np.asarray(group)
    scen = np.asarray(scen)
    for label, g in labels.items():
        for s in range(2):
            if not ((group == g) & (scen == s)).any():
                raise Degenerate(
                    f"no consistent observations for {label.value} in {_SCENARIOS[s].value}; "
                    "kappa needs all three treatments in both scenarios"
                )
    means = np.zeros((3, 2))
    counts = np.zeros((3, 2))
    for g in range(3):
        for s in range(2):
            sel = (group == g) & (scen == s)
            means[g, s] = y[sel].mean()
            counts[g, s] = sel.sum()
    if all(abs(means[0, s] - means[1, s]) < 1e-9 for s in range(2)):
        raise Degenerate(
            "broad and narrow cell means coincide in both scenarios; "
            "the bracketing weight is unidentified on this data"
        )
    return y, group, scen, means, counts


def _kappa_design(theta: np.ndarray, group: np.ndarray, scen: np.ndarray):
    b, n, kappa = theta[0:2], theta[2:4], theta[4]
    fitted = np.where(
        group == 0, b[scen], np.where(group == 1, n[scen], (1.0 - kappa) * b[scen] + kappa * n[scen])
    )
    jac = np.zeros((group.size, 5))
    rows = np.arange(group.size)
    is_b, is_n, is_m = group == 0, group == 1, group == 2
    jac[rows[is_b], scen[is_b]] = 1.0
    jac[rows[is_n], 2 + scen[is_n]] = 1.0
    jac[rows[is_m], scen[is_m]] = 1.0 - kappa
    jac[rows[is_m], 2 + scen[is_m]] = kappa
    jac[rows[is_m], 4] = n[scen[is_m]] - b[scen[is_m]]
    return fitted, jac


def nls_kappa(
    dataset: Dataset,
    broad_label: Treatment = Treatment.BROAD,
    narrow_label: Treatment = Treatment.LOW,
    mid_label: Treatment = Treatment.NARROW,
) -> KappaFit:
    """Estimate the bracketing weight by damped Gauss-Newton.

    The mid treatment's cell is modeled as the kappa-weighted
    combination of the broad-anchor and narrow-anchor cells, jointly
    with the four cell effects, on consistent observations. Starts at
    the saturated cell means with kappa = 0.5.
    """
    y, group, scen, means, counts = _kappa_arrays(dataset, broad_label, narrow_label, mid_label)
    theta = np.array([means[0, 0], means[0, 1], means[1, 0], means[1, 1], 0.5])

    def rss_at(t):
        fitted, _ = _kappa_design(t, group, scen)
        r = y - fitted
        return float(r @ r)

    rss = rss_at(theta)
    converged = False
    iterations = 0
    for iterations in range(1, _MAX_ITER + 1):
        fitted, jac = _kappa_design(theta, group, scen)
        resid = y - fitted
        grad = 2.0 * (jac.T @ resid)
        if float(np.linalg.norm(grad)) < _GRAD_TOL:
            converged = True
            break
        step, *_ = np.linalg.lstsq(jac.T @ jac, jac.T @ resid, rcond=None)
        lam = 1.0
        while lam > 1e-12 and rss_at(theta + lam * step) > rss:
            lam /= 2.0
        taken = lam * step
        theta = theta + taken
        rss = rss_at(theta)
        if float(np.linalg.norm(taken)) < _STEP_TOL:
            fitted, jac = _kappa_design(theta, group, scen)
            grad = 2.0 * (jac.T @ (y - fitted))
            converged = float(np.linalg.norm(grad)) < _GRAD_TOL
            break
    else:
        raise NotConverged(f"Gauss-Newton did not converge in {_MAX_ITER} iterations")

    fitted, jac = _kappa_design(theta, group, scen)
    resid = y - fitted
    bread = np.linalg.inv(jac.T @ jac)
    meat = jac.T @ (jac * (resid**2)[:, None])
    robust = bread @ meat @ bread
    dof = max(y.size - 5, 1)
    model_cov = (resid @ resid / dof) * bread
    se_r = np.sqrt(np.maximum(np.diag(robust), 0.0))
    se_m = np.sqrt(np.maximum(np.diag(model_cov), 0.0))
    return KappaFit(
        b_s=(float(theta[0]), float(theta[1])),
        n_s=(float(theta[2]), float(theta[3])),
        se_b_s=(float(se_r[0]), float(se_r[1])),
        se_n_s=(float(se_r[2]), float(se_r[3])),
        kappa=float(theta[4]),
        se_kappa=float(se_r[4]),
        se_kappa_model=float(se_m[4]),
        iterations=iterations,
        converged=bool(converged),
        rss=float(resid @ resid),
        n_obs=int(y.size),
    )


def kappa_profile_oracle(
    dataset: Dataset,
    broad_label: Treatment = Treatment.BROAD,
    narrow_label: Treatment = Treatment.LOW,
    mid_label: Treatment = Treatment.NARROW,
    kappa_grid: tuple[float, float] = (-1.0, 3.0),
    step: float = 1e-4,
    cell_weights: str = "observations",
) -> float:
    """Brute-force profile of the kappa objective on a fixed grid.

    For each grid kappa the cell effects are concentrated out in closed
    form, so the returned arg-min is an independent check on nls_kappa.
    cell_weights "observations" reproduces the joint least-squares
    objective; "equal" weights each cell mean once instead.
    """
    if cell_weights not in ("observations", "equal"):
        raise ValueError("cell_weights must be 'observations' or 'equal'")
    _, _, _, means, counts = _kappa_arrays(dataset, broad_label, narrow_label, mid_label)
    lo, hi = kappa_grid
    kappas = np.arange(lo, hi + step / 2.0, step)
    u = 1.0 - kappas
    v = kappas
    total = np.zeros_like(kappas)
    for s in range(2):
        gap = u * means[0, s] + v * means[1, s] - means[2, s]
        if cell_weights == "observations":
            n_b, n_n, n_m = counts[0, s], counts[1, s], counts[2, s]
            denom = 1.0 + n_m * (u**2 / n_b + v**2 / n_n)
            total += n_m * gap**2 / denom
        else:
            total += gap**2 / (1.0 + u**2 + v**2)
    return float(kappas[int(np.argmin(total))])


def _tobit_loglik_grad(par, y, X, limit, cens):
    """Negative log-likelihood and gradient in (beta, log sigma)."""
    k = X.shape[1]
    beta, s = par[:k], par[k]
    sigma = math.exp(s)
    xb = X @ beta
    unc = ~cens
    zu = (y[unc] - xb[unc]) / sigma
    ll = float(norm.logpdf(zu).sum()) - unc.sum() * s
    g_beta = X[unc].T @ zu / sigma
    g_s = float((zu**2 - 1.0).sum())
    if cens.any():
        a = (limit - xb[cens]) / sigma
        ll += float(norm.logsf(a).sum())
        lam = np.exp(norm.logpdf(a) - norm.logsf(a))
        g_beta = g_beta + X[cens].T @ lam / sigma
        g_s += float((lam * a).sum())
    grad = np.append(g_beta, g_s)
    return -ll, -grad


def _tobit_grad_bs(beta, sigma, y, X, limit, cens):
    """Analytic gradient in (beta, sigma) for finite-difference Hessians."""
    par = np.append(beta, math.log(sigma))
    _, neg = _tobit_loglik_grad(par, y, X, limit, cens)
    g = -neg
    g[-1] = g[-1] / sigma  # chain rule from log sigma to sigma
    return g


def tobit_right(y, X, limit: float = CENSOR_CODE) -> TobitFit:
    """Right-censored Tobit by BFGS on (beta, log sigma).

    Responses at or above the limit are censored. Starts from least
    squares on the uncensored rows; standard errors come from the
    inverse negative Hessian (central differences of the analytic
    gradient, in the (beta, sigma) parameterization).
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if y.shape != (n,):
        raise ValueError("y and X have mismatched lengths")
    if np.linalg.matrix_rank(X) < k:
        raise RankDeficient("covariate matrix is rank deficient")
    cens = y >= limit - 1e-9
    if cens.all():
        raise AllCensored("every response sits at the censoring limit")

    beta0, *_ = np.linalg.lstsq(X[~cens], y[~cens], rcond=None)
    resid0 = y[~cens] - X[~cens] @ beta0
    sigma0 = max(float(np.sqrt((resid0**2).mean())), 1e-2)
    x0 = np.append(beta0, math.log(sigma0))

    res = optimize.minimize(
        _tobit_loglik_grad,
        x0,
        args=(y, X, limit, cens),
        jac=True,
        method="BFGS",
        options={"gtol": 1e-8, "maxiter": _MAX_ITER},
    )
    if not res.success and float(np.linalg.norm(res.jac, ord=np.inf)) > 1e-4:
        raise NotConverged(f"Tobit optimizer stalled: {res.message}")
    beta = res.x[:k]
    sigma = math.exp(res.x[k])

    # Hessian in (beta, sigma) by central differences of the gradient
    point = np.append(beta, sigma)
    dim = k + 1
    hess = np.zeros((dim, dim))
    for j in range(dim):
        h = 1e-5 * max(1.0, abs(point[j]))
        hi_pt, lo_pt = point.copy(), point.copy()
        hi_pt[j] += h
        lo_pt[j] -= h
        g_hi = _tobit_grad_bs(hi_pt[:k], hi_pt[k], y, X, limit, cens)
        g_lo = _tobit_grad_bs(lo_pt[:k], lo_pt[k], y, X, limit, cens)
        hess[:, j] = (g_hi - g_lo) / (2.0 * h)
    hess = 0.5 * (hess + hess.T)
    try:
        cov = np.linalg.inv(-hess)
    except np.linalg.LinAlgError as exc:
        raise NotConverged("information matrix is singular at the optimum") from exc
    diag = np.diag(cov)
    if (diag <= 0).any():
        raise NotConverged("negative variance estimate; not at an interior maximum")
    se = np.sqrt(diag)
    return TobitFit(
        beta=tuple(float(b) for b in beta),
        se=tuple(float(s) for s in se[:k]),
        sigma=float(sigma),
        se_sigma=float(se[k]),
        loglik=float(-res.fun),
        n_censored=int(cens.sum()),
        n_uncensored=int((~cens).sum()),
        iterations=int(res.nit),
    )


def power_two_sample(
    d: float,
    alpha: float = 0.05,
    power: float = 0.90,
    ratio: float = 1.0,
    wilcoxon_are: bool = False,
) -> tuple[int, int]:
    """Two-sample normal-approximation sample sizes (n_large, n_small).

    ratio is n_large / n_small >= 1. With wilcoxon_are the required
    size is inflated by pi/3, the worst-case relative efficiency of the
    rank-sum test against the t test.
    """
    if not (d > 0 and 0 < alpha < 1 and 0.5 < power < 1 and ratio >= 1):
        raise InvalidParams("need d > 0, alpha in (0,1), power in (0.5,1), ratio >= 1")
    z = float(ndtri(1 - alpha / 2.0) + ndtri(power))
    raw = (1.0 + 1.0 / ratio) * z**2 / d**2
    if wilcoxon_are:
        raw *= math.pi / 3.0
    n_small = max(1, math.ceil(raw))
    n_large = max(1, math.ceil(ratio * raw))
    return n_large, n_small


def ols(y, X) -> OlsFit:
    """Plain least squares with classical standard errors."""
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if np.linalg.matrix_rank(X) < k:
        raise RankDeficient("covariate matrix is rank deficient")
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    sigma2 = float(resid @ resid) / max(n - k, 1)
    cov = sigma2 * np.linalg.inv(X.T @ X)
    return OlsFit(
        beta=tuple(float(b) for b in beta),
        se=tuple(float(s) for s in np.sqrt(np.diag(cov))),
        sigma2=sigma2,
        n_obs=n,
    )
