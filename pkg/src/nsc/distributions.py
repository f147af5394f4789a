"""Coupled exponential (alpha=1) and coupled Gaussian (alpha=2) families.

The alpha=1 family is the generalized Pareto distribution with shape
``kappa`` and scale ``sigma``; the alpha=2 family is the location-scale
Student-t with ``1/kappa`` degrees of freedom. Both reduce to the
exponential / Gaussian at ``kappa = 0``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .algebra import Coupling, coupled_exp_general
from .exceptions import DivergentEscortError, DomainError, QuadratureError, UnsupportedParametersError
from .quadrature import QuadResult, integrate, integrate_even
from .validation import SMALL, check_kappa

__all__ = [
    "CoupledDensityParams",
    "density",
    "log_density",
    "normalization",
    "cdf",
    "cdf_coupled_exponential",
    "ppf_coupled_exponential",
    "support",
    "integrate_over_support",
    "check_power_integrable",
    "gamma_mixing_density",
    "superstatistics_mixture",
    "sample",
]


@dataclass(frozen=True)
class CoupledDensityParams:
    """Location, scale, coupling and family index of a coupled density."""

    mu: float = 0.0
    sigma: float = 1.0
    kappa: float = 0.0
    alpha: int = 1

    def __post_init__(self):
        sigma = float(self.sigma)
        if not (math.isfinite(sigma) and sigma > 0):
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")
        mu = float(self.mu)
        if not math.isfinite(mu):
            raise DomainError("mu must be finite")
        kappa = check_kappa(self.kappa)
        if self.alpha not in (1, 2):
            raise UnsupportedParametersError("alpha must be 1 or 2")
        if self.alpha == 2 and kappa < 0:
            raise UnsupportedParametersError(
                "the coupled Gaussian is only normalized for kappa >= 0"
            )
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "alpha", int(self.alpha))

    @property
    def coupling(self):
        return Coupling(self.kappa, self.alpha)

    def replace(self, **changes):
        fields = dict(mu=self.mu, sigma=self.sigma, kappa=self.kappa, alpha=self.alpha)
        fields.update(changes)
        return CoupledDensityParams(**fields)


def _out(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def normalization(params):
    """Normalizing constant ``Z`` of the coupled density.

    ``Z = sigma`` for alpha=1. For alpha=2 and kappa>0,
    ``Z = sqrt(pi) sigma Gamma(1/(2 kappa)) / (sqrt(kappa) Gamma((1+kappa)/(2 kappa)))``,
    evaluated as ``sigma * B(1/(2 kappa), 1/2) / sqrt(kappa)`` through the
    log-beta function; the kappa -> 0 limit is ``sqrt(2 pi) sigma``.
    """
    if params.alpha == 1:
        return params.sigma
    if params.kappa < 0:
        raise UnsupportedParametersError("alpha=2 requires kappa >= 0")
    if params.kappa < SMALL:
        return math.sqrt(2.0 * math.pi) * params.sigma
    k = params.kappa
    return params.sigma * math.exp(special.betaln(0.5 / k, 0.5) - 0.5 * math.log(k))


def support(params):
    """Closed support ``(lower, upper)``; infinite ends are ``+-inf``."""
    if params.alpha == 2:
        return -math.inf, math.inf
    if params.kappa < 0:
        return params.mu, params.mu - params.sigma / params.kappa
    return params.mu, math.inf


def density(params, x):
    """Normalized density; 0 outside the support.

    Examples
    --------
    >>> density(CoupledDensityParams(sigma=1.0, kappa=1.0, alpha=1), 1.0)
    0.25
    """
    x = np.asarray(x, dtype=float)
    z = (x - params.mu) / params.sigma
    kernel = coupled_exp_general(np.abs(z) ** params.alpha, params.coupling, sign=-1)
    value = np.asarray(kernel, dtype=float) / normalization(params)
    if params.alpha == 1:
        value = np.where(z < 0, 0.0, value)
    return _out(value)


def log_density(params, x):
    """Natural log of the density, ``-inf`` outside the support."""
    x = np.asarray(x, dtype=float)
    z = (x - params.mu) / params.sigma
    k = params.kappa
    u = np.abs(z) ** params.alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        if abs(k) < SMALL:
            kern = -u / params.alpha
        else:
            base = k * u
            kern = np.where(
                base > -1.0,
                -(1.0 + k) / (params.alpha * k) * np.log1p(np.where(base > -1.0, base, 0.0)),
                -np.inf,
            )
    value = kern - math.log(normalization(params))
    if params.alpha == 1:
        value = np.where(z < 0, -np.inf, value)
    return _out(value)


def cdf_coupled_exponential(params, x):
    """Closed-form CDF of the coupled exponential, ``1 - (1 + kappa z)_+ ** (-1/kappa)``."""
    if params.alpha != 1:
        raise UnsupportedParametersError("cdf_coupled_exponential needs alpha=1")
    x = np.asarray(x, dtype=float)
    z = np.maximum((x - params.mu) / params.sigma, 0.0)
    k = params.kappa
    if abs(k) < SMALL:
        value = -np.expm1(-z)
    else:
        base = k * z
        inside = base > -1.0
        log_tail = -np.log1p(np.where(inside, base, 0.0)) / k
        value = np.where(inside, -np.expm1(log_tail), 1.0)
    return _out(np.clip(value, 0.0, 1.0))


def ppf_coupled_exponential(params, u):
    """Inverse of :func:`cdf_coupled_exponential` for ``u`` in [0, 1)."""
    if params.alpha != 1:
        raise UnsupportedParametersError("ppf_coupled_exponential needs alpha=1")
    u = np.asarray(u, dtype=float)
    k = params.kappa
    log_tail = np.log1p(-u)
    if abs(k) < SMALL:
        z = -log_tail
    else:
        z = np.expm1(-k * log_tail) / k
    return _out(params.mu + params.sigma * z)


def cdf(params, x):
    """CDF of either family; alpha=2 goes through the Student-t CDF."""
    if params.alpha == 1:
        return cdf_coupled_exponential(params, x)
    z = (np.asarray(x, dtype=float) - params.mu) / params.sigma
    if params.kappa < SMALL:
        return _out(special.ndtr(z))
    return _out(special.stdtr(1.0 / params.kappa, z))


def check_power_integrable(params, power, n=0):
    """Raise :class:`DivergentEscortError` if ``|x - mu|**n f(x)**power`` has no finite integral."""
    k = params.kappa
    if k > 0:
        tail = power * (1.0 + k) / k - n
        if tail <= 1.0:
            raise DivergentEscortError(
                f"integrand decays like |x|**-{tail:.6g}; power {power:.6g} "
                f"diverges for kappa={k:.6g}"
            )
    elif k < 0:
        # f vanishes like (edge distance)**(-(1+kappa)/kappa) at the support edge
        edge = -power * (1.0 + k) / k
        if edge <= -1.0:
            raise DivergentEscortError(
                f"integrand behaves like (edge distance)**{edge:.6g} at the support edge"
            )
    elif power <= 0:
        raise DivergentEscortError(f"power {power:.6g} does not decay for kappa=0")


def integrate_over_support(params, func, cfg=None, *, even=False, kappa_tail=None, strict=True):
    """Integrate ``func(x)`` over the support of ``params``.

    Parameters
    ----------
    func : callable
        Vectorized integrand in the data coordinate ``x``.
    even : bool
        Declare ``func`` symmetric about ``mu`` (alpha=2 only); the half-line
        integral is doubled.
    kappa_tail : float, optional
        Coupling handed to the quadrature tail policy.
    """
    lo, hi = support(params)
    if params.alpha == 2:
        if even:
            res = integrate_even(func, params.mu, cfg=cfg, kappa=kappa_tail)
        else:
            left = integrate(func, -math.inf, params.mu, cfg, kappa=kappa_tail)
            right = integrate(func, params.mu, math.inf, cfg, kappa=kappa_tail)
            res = QuadResult(
                left.value + right.value,
                left.error + right.error,
                left.converged and right.converged,
                left.subdivisions + right.subdivisions,
            )
    elif math.isinf(hi) or hi - lo <= 10.0 * params.sigma:
        res = integrate(func, lo, hi, cfg, kappa=kappa_tail)
    else:
        # a long compact support: split geometrically so the mass near the
        # location is not missed by the first panels
        edges = [lo]
        width = params.sigma
        while lo + width < hi:
            edges.append(lo + width)
            width *= 10.0
        edges.append(hi)
        parts = [integrate(func, a, b, cfg) for a, b in zip(edges, edges[1:])]
        res = QuadResult(
            math.fsum(r.value for r in parts),
            math.fsum(r.error for r in parts),
            all(r.converged for r in parts),
            sum(r.subdivisions for r in parts),
        )
    if strict and not res.converged:
        raise QuadratureError(
            f"tolerance not met: value={res.value!r}, error={res.error!r}",
            value=res.value,
            error=res.error,
        )
    return res


def gamma_mixing_density(kappa, sigma, beta):
    """Gamma density of the fluctuating inverse scale.

    Shape ``1/kappa`` and scale ``kappa/sigma``: mean ``1/sigma`` and
    relative variance ``kappa``.
    """
    kappa = float(kappa)
    sigma = float(sigma)
    if not (kappa > 0 and sigma > 0):
        raise DomainError("gamma mixing density needs kappa > 0 and sigma > 0")
    beta = np.asarray(beta, dtype=float)
    shape = 1.0 / kappa
    scale = kappa / sigma
    with np.errstate(divide="ignore", invalid="ignore"):
        logf = (
            (shape - 1.0) * np.log(np.where(beta > 0, beta, 1.0))
            - beta / scale
            - special.gammaln(shape)
            - shape * math.log(scale)
        )
        value = np.where(beta > 0, np.exp(logf), 0.0)
    if shape == 1.0:
        value = np.where(beta == 0, 1.0 / scale, value)
    elif shape < 1.0:
        value = np.where(beta == 0, np.inf, value)
    return _out(value)


def superstatistics_mixture(kappa, sigma, x, cfg=None):
    """Exponential density averaged over a gamma-distributed inverse scale.

    Evaluates ``integral f(beta) * beta * exp(-beta x) d beta`` by quadrature;
    the result is the coupled exponential density at ``x``.
    """
    kappa = float(kappa)
    sigma = float(sigma)
    x = float(x)
    if not (kappa > 0 and sigma > 0):
        raise DomainError("superstatistics needs kappa > 0 and sigma > 0")
    if x < 0:
        raise DomainError("the exponential is supported on x >= 0")
    shape = 1.0 / kappa
    scale = kappa / sigma
    log_norm = special.gammaln(shape) + shape * math.log(scale)

    def integrand(b):
        b = np.asarray(b, dtype=float)
        with np.errstate(divide="ignore"):
            logv = shape * np.log(b) - b * (1.0 / scale + x) - log_norm
        return np.where(b > 0, np.exp(logv), 0.0)

    res = integrate(integrand, 0.0, math.inf, cfg)
    if not res.converged:
        raise QuadratureError(
            "superstatistics quadrature did not converge", value=res.value, error=res.error
        )
    return res.value


def sample(params, n, seed):
    """Draw ``n`` deterministic samples for a given integer ``seed``.

    alpha=1 inverts the closed-form CDF. alpha=2 draws a gamma precision
    (shape ``1/(2 kappa)``, scale ``2 kappa / sigma**2``, the inverse-scale
    mixing law with coupling ``2 kappa``) and then a centred Gaussian with
    that precision, which is the Student-t scale mixture.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    if params.alpha == 1:
        return ppf_coupled_exponential(params, rng.random(n))
    if params.kappa < 0:
        raise UnsupportedParametersError("alpha=2 sampling requires kappa >= 0")
    if params.kappa < SMALL:
        return params.mu + params.sigma * rng.standard_normal(n)
    k = params.kappa
    precision = rng.gamma(shape=0.5 / k, scale=2.0 * k / params.sigma**2, size=n)
    return params.mu + rng.standard_normal(n) / np.sqrt(precision)
