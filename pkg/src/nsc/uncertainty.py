"""Weighted generalized means and the coupled average uncertainty."""

import math

import numpy as np
from scipy.special import logsumexp

from .algebra import Coupling, coupled_exp_general, coupled_log
from .distributions import (
    CoupledDensityParams,
    check_power_integrable,
    density,
    integrate_over_support,
    log_density,
)
from .escort import as_distribution
from .validation import SMALL, check_positive, check_weights

__all__ = [
    "weighted_generalized_mean",
    "coupled_log_average",
    "coupled_average_uncertainty_discrete",
    "coupled_average_uncertainty_continuous",
    "log_average_density",
    "coupled_gaussian_second_moment",
    "uncertainty_sweep",
    "sweep_extremum",
    "FIGURE2_METRIC_KAPPAS",
    "default_dist_kappas",
]

FIGURE2_METRIC_KAPPAS = (0.2, 0.4, 0.6, 0.8)


def default_dist_kappas():
    """Distribution couplings 0.01, 0.02, ..., 1.00."""
    return [round(0.01 * i, 2) for i in range(1, 101)]


def _log_power_mean(logs, w, e):
    """``log(sum w exp(e*logs) / sum w)``, accurate for small and large ``e``."""
    t = e * logs
    if np.max(np.abs(t)) < 0.5:
        # expm1 keeps the m -> 0 limit; dividing by the weight total keeps
        # its rounding from being amplified by 1/m
        return math.log1p(math.fsum(w * np.expm1(t)) / math.fsum(w))
    # far from 1 the sum can be tiny, where log1p(s) with s near -1 cancels
    return float(logsumexp(t, b=w)) - math.log(math.fsum(w))


def weighted_generalized_mean(values, weights, moment):
    """Weighted generalized mean ``(sum w_i x_i**(-m))**(-1/m)``.

    With this sign convention ``moment=-1`` is the arithmetic mean and
    ``moment -> 0`` the weighted geometric mean.

    Parameters
    ----------
    values : array-like of positive floats
    weights : array-like
        Nonnegative weights summing to one.
    moment : float

    Returns
    -------
    float
    """
    x = check_positive(values)
    w = check_weights(weights, n=x.size)
    logs = np.log(x)
    m = float(moment)
    if abs(m) < SMALL:
        return math.exp(float(np.dot(w, logs)))
    return math.exp(-_log_power_mean(logs, w, -m) / m)


def coupled_log_average(values, weights, c):
    """Coupled-log average ``exp_kappa**(-1/alpha)(sum w_i ln_kappa(x_i**-alpha))``.

    Computed through the coupled logarithm and exponential, independently of
    :func:`weighted_generalized_mean`, to which it is equal with
    ``moment = alpha*kappa/(1+kappa)``.
    """
    x = check_positive(values)
    w = check_weights(weights, n=x.size)
    logs = np.asarray(coupled_log(x ** (-c.alpha), c.kappa), dtype=float)
    return float(coupled_exp_general(math.fsum(w * logs), c, sign=-1))


def coupled_average_uncertainty_discrete(p, c):
    """Coupled average uncertainty ``(sum p_i**(1+m))**(1/m)``.

    Equals the weighted generalized mean of ``p`` weighted by its coupled
    probabilities; at ``m -> 0`` it is ``prod p_i**p_i``.

    Examples
    --------
    >>> from nsc.algebra import Coupling
    >>> coupled_average_uncertainty_discrete([0.25] * 4, Coupling(0.7, 2))
    0.25
    """
    p = as_distribution(p).probs
    return math.exp(_log_gm_discrete(p, c.moment))


def _log_gm_discrete(p, m):
    logs = np.log(p)
    if abs(m) < SMALL:
        return math.fsum(p * logs)
    return _log_power_mean(logs, p, m) / m


def _excess_integral(params, m, cfg=None):
    """``(integral f**(1+m) - 1) / m``, tending to ``integral f ln f`` as m -> 0."""
    if abs(m) < SMALL:
        def integrand(x):
            logf = np.asarray(log_density(params, x), dtype=float)
            f = np.exp(logf)
            return np.where(f > 1e-300, f * logf, 0.0)
    else:
        check_power_integrable(params, 1.0 + m)

        def integrand(x):
            logf = np.asarray(log_density(params, x), dtype=float)
            with np.errstate(invalid="ignore"):
                val = np.exp(logf) * np.expm1(m * logf) / m
            return np.where(np.isfinite(logf), val, 0.0)

    res = integrate_over_support(params, integrand, cfg, even=params.alpha == 2)
    return res.value


def log_average_density(params, metric, cfg=None):
    """Natural log of the coupled average uncertainty of a coupled density."""
    m = metric.moment
    excess = _excess_integral(params, m, cfg)
    if abs(m) < SMALL:
        return excess
    return math.log1p(m * excess) / m


def coupled_average_uncertainty_continuous(params, metric, cfg=None):
    """Coupled average density ``(integral f**(1+m) dx)**(1/m)`` by quadrature.

    Parameters
    ----------
    params : CoupledDensityParams
        Distribution being summarized.
    metric : Coupling
        Coupling of the average; ``m = metric.moment``.

    Raises
    ------
    DivergentEscortError
        If ``f**(1+m)`` is not integrable.
    QuadratureError
        If the integral does not reach the configured tolerance.
    """
    return math.exp(log_average_density(params, metric, cfg))


def coupled_gaussian_second_moment(kappa, moment, sigma=1.0):
    """Escort second moment of a coupled Gaussian under escort power ``1 + moment``.

    ``integral x**2 f**(1+m) / integral f**(1+m)`` in closed form (a ratio of
    beta functions), ``sigma**2 / ((1+m)(1+kappa) - 3 kappa)``. Returns
    ``inf`` when the numerator integral diverges.
    """
    kappa = float(kappa)
    denom = (1.0 + moment) * (1.0 + kappa) - 3.0 * kappa
    if denom <= 0:
        return math.inf
    return sigma**2 / denom


def uncertainty_sweep(dist_kappas, metric_kappas, sigma=1.0, mu=0.0, scale="coupled-moment", cfg=None):
    """Coupled average uncertainty of coupled Gaussians across distribution couplings.

    Parameters
    ----------
    dist_kappas, metric_kappas : sequence of float
    sigma : float
        Scale constraint.
    scale : {"coupled-moment", "fixed"}
        ``"coupled-moment"`` rescales each distribution so that its second
        moment under the metric's escort power equals ``sigma**2`` (the
        constraint under which the matched coupled Gaussian is the
        maximum-entropy law). ``"fixed"`` uses ``sigma`` directly. Rows whose
        constrained scale does not exist get NaN.

    Returns
    -------
    list of dict
        One row per ``(metric_kappa, dist_kappa)`` in grid order.
    """
    if scale not in ("coupled-moment", "fixed"):
        raise ValueError("scale must be 'coupled-moment' or 'fixed'")
    dist_kappas = [float(k) for k in dist_kappas]
    metric_kappas = [float(k) for k in metric_kappas]
    if not dist_kappas or not metric_kappas:
        raise ValueError("sweep grids must be nonempty")
    rows = []
    for mk in metric_kappas:
        metric = Coupling(mk, 2.0)
        matched = CoupledDensityParams(mu=mu, sigma=sigma, kappa=mk, alpha=2)
        matched_value = float(density(matched, mu + sigma))
        for dk in dist_kappas:
            if scale == "fixed":
                s = float(sigma)
            else:
                second = coupled_gaussian_second_moment(dk, metric.moment, 1.0)
                s = float(sigma) / math.sqrt(second) if math.isfinite(second) else math.nan
            if math.isfinite(s):
                params = CoupledDensityParams(mu=mu, sigma=s, kappa=dk, alpha=2)
                value = coupled_average_uncertainty_continuous(params, metric, cfg)
                at_width = float(density(params, mu + s))
            else:
                value = at_width = math.nan
            rows.append(
                {
                    "metric_kappa": mk,
                    "dist_kappa": dk,
                    "sigma": float(sigma),
                    "dist_sigma": s,
                    "moment": metric.moment,
                    "average_uncertainty": value,
                    "density_at_width": at_width,
                    "matched_value": matched_value,
                }
            )
    return rows


def sweep_extremum(rows, metric_kappa):
    """Locate the extremum of one sweep row.

    Returns
    -------
    dict
        ``argmin``/``argmax`` distribution couplings, their values, and
        ``character`` ("minimum", "maximum" or "none") of the point whose
        distribution coupling equals the metric coupling, judged against its
        grid neighbours.
    """
    sel = [r for r in rows if r["metric_kappa"] == metric_kappa]
    if not sel:
        raise ValueError(f"no rows for metric kappa {metric_kappa!r}")
    sel = [r for r in sel if math.isfinite(r["average_uncertainty"])]
    ks = np.array([r["dist_kappa"] for r in sel])
    vals = np.array([r["average_uncertainty"] for r in sel])
    i = int(np.argmin(np.abs(ks - metric_kappa)))
    character = "none"
    if 0 < i < len(ks) - 1:
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            character = "minimum"
        elif vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]:
            character = "maximum"
    return {
        "metric_kappa": metric_kappa,
        "argmin": float(ks[np.argmin(vals)]),
        "min": float(vals.min()),
        "argmax": float(ks[np.argmax(vals)]),
        "max": float(vals.max()),
        "match_kappa": float(ks[i]),
        "match_value": float(vals[i]),
        "character": character,
    }
