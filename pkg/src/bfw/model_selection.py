"""Model comparison: information criteria, Kolmogorov-Smirnov distance,
empirical step curves, and maximum-likelihood fits for the implemented
families (four-parameter model, its two-parameter base, and the ordinary
two-parameter Weibull).

The Weibull family is exposed in both common parameterizations.  The scale
form F(x) = 1 - exp(-(x/scale)^shape) is the default: it is the one whose
fitted (shape, scale) pair matches published analyses of the bundled pump
data once their hundreds-of-hours unit convention is accounted for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize

from . import inference
from .core import BFWParams, bfw_cdf, bfw_log_pdf, bfw_pdf
from .errors import DomainError
from .flexible_weibull import FWParams, fw_cdf, fw_log_pdf, fw_pdf
from .inference import OptimizerConfig

__all__ = [
    "InformationCriteria",
    "StepCurve",
    "ModelFamily",
    "ComparisonRow",
    "ComparisonTable",
    "information_criteria",
    "ks_statistic",
    "ecdf",
    "kaplan_meier",
    "get_family",
    "available_families",
    "fit_model",
    "compare_models",
    "weibull_loglik_grad",
]


@dataclass(frozen=True)
class InformationCriteria:
    aic: float
    aicc: float
    bic: float
    hqic: float


def information_criteria(ll, k, n):
    """AIC, AICC, BIC and HQIC from a log-likelihood with k parameters, n points.

    AICC is the small-sample correction AIC + 2k(k+1)/(n-k-1); it is NaN
    (undefined) when n <= k + 1.
    """
    minus_two = -2.0 * ll
    aic = minus_two + 2.0 * k
    aicc = aic + 2.0 * k * (k + 1.0) / (n - k - 1.0) if n > k + 1 else math.nan
    bic = minus_two + k * math.log(n)
    hqic = minus_two + 2.0 * k * math.log(math.log(n))
    return InformationCriteria(aic=aic, aicc=aicc, bic=bic, hqic=hqic)


def ks_statistic(data, cdf):
    """Two-sided one-sample sup distance between the empirical CDF and ``cdf``.

    Tied observations accumulate before the comparison, so the statistic is
    exact in the presence of duplicates.
    """
    values, counts = np.unique(np.asarray(data.times, dtype=float), return_counts=True)
    n = counts.sum()
    cum = np.cumsum(counts)
    model = np.asarray(cdf(values), dtype=float)
    upper = np.max(cum / n - model)
    lower = np.max(model - (cum - counts) / n)
    return float(max(upper, lower))


@dataclass(frozen=True)
class StepCurve:
    """Right-continuous step function on [0, inf).

    ``values[i]`` holds from ``times[i]`` (inclusive) up to the next
    breakpoint; ``initial_value`` holds before the first breakpoint.
    """

    times: np.ndarray
    values: np.ndarray
    initial_value: float

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise DomainError("times and values must be matching 1-d arrays")
        if np.any(np.diff(times) <= 0):
            raise DomainError("breakpoint times must be strictly increasing")
        if np.any((values < 0) | (values > 1)) or not 0.0 <= self.initial_value <= 1.0:
            raise DomainError("step curve values must lie in [0, 1]")
        times.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def value_at(self, t):
        idx = np.searchsorted(self.times, np.asarray(t, dtype=float), side="right")
        padded = np.concatenate(([self.initial_value], self.values))
        out = padded[idx]
        return float(out) if np.ndim(t) == 0 else out


def ecdf(data):
    """Empirical CDF: jumps of (tie count)/n at each distinct observation."""
    values, counts = np.unique(np.asarray(data.times, dtype=float), return_counts=True)
    return StepCurve(times=values, values=np.cumsum(counts) / counts.sum(), initial_value=0.0)


def kaplan_meier(data):
    """Product-limit survival estimate for complete (uncensored) data.

    Without censoring this reduces to S(t) = #{x > t}/n, the exact
    complement of the empirical CDF.
    """
    values, counts = np.unique(np.asarray(data.times, dtype=float), return_counts=True)
    return StepCurve(times=values, values=1.0 - np.cumsum(counts) / counts.sum(), initial_value=1.0)


# ---------------------------------------------------------------------------
# model families


@dataclass(frozen=True)
class ModelFamily:
    """A fittable family: accessors take a plain estimates dict."""

    name: str
    parameter_count: int
    param_names: tuple[str, ...]
    cdf: Callable
    pdf: Callable
    log_pdf: Callable
    fit: Callable  # Dataset -> (estimates dict, log-likelihood)


def _two_param_mle(negloglik_grad, starts, polish_objective=None):
    """Small quasi-Newton driver in log-parameter space for 2-d families."""
    best = None
    for z0 in starts:
        res = minimize(
            negloglik_grad,
            np.asarray(z0, dtype=float),
            jac=True,
            method="L-BFGS-B",
            options=dict(maxiter=500, ftol=1e-15, gtol=1e-12),
        )
        if best is None or res.fun < best.fun:
            best = res
    z = best.x
    # a few damped Newton steps on the gradient, Hessian by central differences
    for _ in range(25):
        f0, g0 = negloglik_grad(z)
        if np.max(np.abs(g0)) < 1e-10:
            break
        h = np.empty((2, 2))
        eps = 1e-6
        for j in range(2):
            dz = np.zeros(2)
            dz[j] = eps
            h[:, j] = (negloglik_grad(z + dz)[1] - negloglik_grad(z - dz)[1]) / (2 * eps)
        try:
            step = np.linalg.solve(0.5 * (h + h.T), -g0)
        except np.linalg.LinAlgError:
            break
        damp, accepted = 1.0, False
        for _ in range(30):
            cand = z + damp * step
            if negloglik_grad(cand)[0] < f0:
                z, accepted = cand, True
                break
            damp *= 0.5
        if not accepted:
            break
    f, _ = negloglik_grad(z)
    return np.exp(z), -f


_TWO_PARAM_STARTS = [np.log([0.5, 0.5]), np.log([0.05, 2.0]), np.log([2.0, 0.05]), np.log([1.0, 10.0])]


def _fit_fw(data):
    x = data.times

    def nll(z):
        with np.errstate(all="ignore"):
            theta = np.exp(z)
            params = (theta[0], theta[1], 1.0, 1.0)
            ll = inference._loglik_raw(x, params)
            if not math.isfinite(ll):
                return 1e100, np.zeros(2)
            grad = inference._score_raw(x, params)[:2] * theta
        return -ll, -grad

    theta, ll = _two_param_mle(nll, _TWO_PARAM_STARTS)
    return {"alpha": float(theta[0]), "beta": float(theta[1])}, ll


def _weibull_logpdf_scale(x, shape, scale):
    z = x / scale
    return math.log(shape / scale) + (shape - 1.0) * np.log(z) - z**shape


def weibull_loglik_grad(x, shape, scale):
    """Log-likelihood and its (shape, scale) gradient for the scale form."""
    n = x.size
    log_x = np.log(x)
    zs = (x / scale) ** shape
    ll = n * math.log(shape) - n * shape * math.log(scale) + (shape - 1.0) * log_x.sum() - zs.sum()
    d_shape = (
        n / shape - n * math.log(scale) + log_x.sum() - np.sum(zs * (log_x - math.log(scale)))
    )
    d_scale = (shape / scale) * (zs.sum() - n)
    return ll, np.array([d_shape, d_scale])


def _fit_weibull(data, parameterization):
    x = data.times

    def nll(z):
        with np.errstate(all="ignore"):
            shape, scale = np.exp(z)
            ll, grad = weibull_loglik_grad(x, shape, scale)
            if not math.isfinite(ll):
                return 1e100, np.zeros(2)
        return -ll, -grad * np.array([shape, scale])

    theta, ll = _two_param_mle(nll, _TWO_PARAM_STARTS)
    shape, scale = float(theta[0]), float(theta[1])
    if parameterization == "scale":
        return {"shape": shape, "scale": scale}, ll
    # rate form F = 1 - exp(-rate * x^shape); same family, rate = scale^-shape
    return {"rate": scale ** (-shape), "shape": shape}, ll


def _weibull_cdf(estimates):
    if "scale" in estimates:
        shape, scale = estimates["shape"], estimates["scale"]
        return lambda x: -np.expm1(-((np.asarray(x, dtype=float) / scale) ** shape))
    rate, shape = estimates["rate"], estimates["shape"]
    return lambda x: -np.expm1(-rate * np.asarray(x, dtype=float) ** shape)


def _weibull_family(parameterization="scale"):
    if parameterization not in ("scale", "rate"):
        raise DomainError("weibull parameterization must be 'scale' or 'rate'")

    def cdf(x, estimates):
        return _weibull_cdf(estimates)(x)

    def log_pdf(x, estimates):
        if "scale" in estimates:
            shape, scale = estimates["shape"], estimates["scale"]
        else:
            shape = estimates["shape"]
            scale = estimates["rate"] ** (-1.0 / shape)
        return _weibull_logpdf_scale(np.asarray(x, dtype=float), shape, scale)

    names = ("shape", "scale") if parameterization == "scale" else ("rate", "shape")
    return ModelFamily(
        name="weibull",
        parameter_count=2,
        param_names=names,
        cdf=cdf,
        pdf=lambda x, est: np.exp(log_pdf(x, est)),
        log_pdf=log_pdf,
        fit=lambda data: _fit_weibull(data, parameterization),
    )


def _fw_family():
    def cdf(x, est):
        return fw_cdf(x, FWParams(est["alpha"], est["beta"]))

    return ModelFamily(
        name="fw",
        parameter_count=2,
        param_names=("alpha", "beta"),
        cdf=cdf,
        pdf=lambda x, est: fw_pdf(x, FWParams(est["alpha"], est["beta"])),
        log_pdf=lambda x, est: fw_log_pdf(x, FWParams(est["alpha"], est["beta"])),
        fit=_fit_fw,
    )


def _bfw_family(config: Optional[OptimizerConfig] = None):
    def fit(data):
        result = inference.fit_mle(data, config)
        est = result.estimates
        return (
            {"alpha": est.alpha, "beta": est.beta, "p": est.p, "q": est.q},
            result.log_likelihood,
        )

    def cdf(x, est):
        return bfw_cdf(x, BFWParams(est["alpha"], est["beta"], est["p"], est["q"]))

    return ModelFamily(
        name="bfw",
        parameter_count=4,
        param_names=("alpha", "beta", "p", "q"),
        cdf=cdf,
        pdf=lambda x, est: bfw_pdf(x, BFWParams(est["alpha"], est["beta"], est["p"], est["q"])),
        log_pdf=lambda x, est: bfw_log_pdf(x, BFWParams(est["alpha"], est["beta"], est["p"], est["q"])),
        fit=fit,
    )


def get_family(name, weibull_parameterization="scale", optimizer_config=None):
    """Family registry: 'bfw', 'fw', or 'weibull'."""
    key = name.lower()
    if key == "bfw":
        return _bfw_family(optimizer_config)
    if key == "fw":
        return _fw_family()
    if key in ("weibull", "weibull2p", "wd"):
        return _weibull_family(weibull_parameterization)
    raise DomainError(f"unknown model family {name!r}")


def available_families():
    return ("bfw", "fw", "weibull")


@dataclass(frozen=True)
class ComparisonRow:
    model: str
    estimates: Optional[dict]
    log_likelihood: float
    minus_two_ll: float
    aic: float
    aicc: float
    bic: float
    hqic: float
    ks: float
    error: Optional[str] = None


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]
    label: str
    n: int


def fit_model(family, data):
    """Fit one family and assemble its criteria and K-S row."""
    estimates, ll = family.fit(data)
    crit = information_criteria(ll, family.parameter_count, data.n)
    ks = ks_statistic(data, lambda x: family.cdf(x, estimates))
    return ComparisonRow(
        model=family.name,
        estimates=estimates,
        log_likelihood=ll,
        minus_two_ll=-2.0 * ll,
        aic=crit.aic,
        aicc=crit.aicc,
        bic=crit.bic,
        hqic=crit.hqic,
        ks=ks,
    )


def compare_models(data, families):
    """One row per family, sorted by AIC ascending (failures sort last).

    A family whose fit raises does not abort the comparison; the error text
    is recorded in its row.
    """
    families = list(families)
    if not families:
        raise DomainError("at least one family is required")
    rows = []
    for family in families:
        try:
            rows.append(fit_model(family, data))
        except Exception as exc:  # noqa: BLE001 - failures are part of the contract
            rows.append(
                ComparisonRow(
                    model=family.name,
                    estimates=None,
                    log_likelihood=math.nan,
                    minus_two_ll=math.nan,
                    aic=math.nan,
                    aicc=math.nan,
                    bic=math.nan,
                    hqic=math.nan,
                    ks=math.nan,
                    error=str(exc),
                )
            )
    rows.sort(key=lambda row: math.inf if math.isnan(row.aic) else row.aic)
    return ComparisonTable(rows=tuple(rows), label=data.label, n=data.n)
