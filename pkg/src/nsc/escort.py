"""Coupled (escort) probabilities, coupled densities and coupled moments."""

import math

import numpy as np

from .distributions import (
    check_power_integrable,
    density,
    integrate_over_support,
)
from .exceptions import UnsupportedParametersError
from .validation import check_probabilities

__all__ = [
    "DiscreteDistribution",
    "as_distribution",
    "escort_power",
    "coupled_probability",
    "coupled_density_transform",
    "escort_normalizer",
    "coupled_moment_discrete",
    "coupled_moment_continuous",
]


class DiscreteDistribution:
    """Validated probability vector with zero-probability states removed.

    Parameters
    ----------
    probs : array-like
        Nonnegative probabilities summing to one within 1e-9.
    renormalize : bool, optional
        Rescale instead of raising :class:`~nsc.exceptions.NormalizationError`.
    """

    __slots__ = ("_probs",)

    def __init__(self, probs, renormalize=False):
        p = check_probabilities(probs, renormalize=renormalize)
        p.setflags(write=False)
        self._probs = p

    @property
    def probs(self):
        return self._probs

    def __len__(self):
        return self._probs.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._probs, dtype=dtype)

    def __repr__(self):
        return f"DiscreteDistribution({self._probs.tolist()!r})"


def as_distribution(p, renormalize=False):
    if isinstance(p, DiscreteDistribution):
        return p
    return DiscreteDistribution(p, renormalize=renormalize)


def escort_power(p, exponent):
    """Renormalized power ``p_i**exponent / sum_j p_j**exponent``."""
    p = as_distribution(p).probs
    logw = exponent * np.log(p)
    logw -= logw.max()
    w = np.exp(logw)
    return w / math.fsum(w)


def coupled_probability(p, c):
    """Coupled probability ``p_i**(1+m) / sum_j p_j**(1+m)`` with ``m = c.moment``.

    Examples
    --------
    >>> from nsc.algebra import Coupling
    >>> coupled_probability([0.5, 0.5], Coupling(1.0)).probs.tolist()
    [0.5, 0.5]
    """
    return _trusted(escort_power(p, 1.0 + c.moment))


def _trusted(w):
    # escort weights are already validated and normalized
    d = DiscreteDistribution.__new__(DiscreteDistribution)
    w = np.asarray(w, dtype=float)
    w.setflags(write=False)
    d._probs = w
    return d


def escort_normalizer(params, c, cfg=None):
    """``integral f(x)**(1+m) dx`` for the coupled density ``params``."""
    power = 1.0 + c.moment
    check_power_integrable(params, power)
    if power == 1.0:
        return 1.0
    res = integrate_over_support(
        params,
        lambda x: density(params, x) ** power,
        cfg,
        even=params.alpha == 2,
    )
    return res.value


def coupled_density_transform(params, c, x, cfg=None):
    """Coupled density ``f(x)**(1+m) / integral f**(1+m)``.

    Raises
    ------
    DivergentEscortError
        When ``f**(1+m)`` is not integrable over the support.
    """
    power = 1.0 + c.moment
    if power == 1.0:
        return density(params, x)
    norm = escort_normalizer(params, c, cfg)
    f = np.asarray(density(params, x), dtype=float)
    out = f**power / norm
    return float(out) if out.ndim == 0 else out


def coupled_moment_discrete(xs, p, n, kappa):
    """Coupled n-th moment with escort exponent ``1 + n*kappa/(1+kappa)``.

    The stability index does not enter.
    """
    xs = np.asarray(xs, dtype=float)
    n = int(n)
    if n < 1:
        raise ValueError("n must be a positive integer")
    raw = np.asarray(p.probs if isinstance(p, DiscreteDistribution) else p, dtype=float)
    if xs.shape != raw.shape:
        raise ValueError("xs and p must have the same length")
    p = as_distribution(raw)
    xs = xs[raw > 0]
    kappa = float(kappa)
    w = escort_power(p, 1.0 + n * kappa / (1.0 + kappa))
    return float(np.dot(w, xs**n))


def coupled_moment_continuous(params, n, cfg=None):
    """Escort-weighted moment about ``mu`` that recovers the scale.

    ``n=1`` (alpha=1) uses exponent ``(1+2 kappa)/(1+kappa)`` and returns
    ``sigma``; ``n=2`` (alpha=2) uses ``(1+3 kappa)/(1+kappa)`` and returns
    ``sigma**2``.
    """
    if (params.alpha, n) not in ((1, 1), (2, 2)):
        raise UnsupportedParametersError("use n=1 with alpha=1 or n=2 with alpha=2")
    if params.kappa < 0:
        raise UnsupportedParametersError("coupled moments need kappa >= 0")
    k = params.kappa
    power = 1.0 + n * k / (1.0 + k)
    check_power_integrable(params, power, n=n)
    even = params.alpha == 2
    mu = params.mu

    def weight(x):
        return density(params, x) ** power

    num = integrate_over_support(params, lambda x: (x - mu) ** n * weight(x), cfg, even=even)
    den = integrate_over_support(params, weight, cfg, even=even)
    return num.value / den.value
