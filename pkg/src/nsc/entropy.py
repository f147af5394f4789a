"""Shannon, Renyi, Tsallis, normalized Tsallis and coupled entropies.

Every kind is a transform of the coupled average uncertainty ``GM``::

    S = -(GM**power - 1) / norm

with the (moment, power, norm) triple of :class:`EntropySpec`. Renyi and
Shannon are the ``power, norm -> 0`` limit ``S = -ln GM``; Shannon also takes
``moment -> 0``.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .algebra import Coupling
from .distributions import CoupledDensityParams, integrate_over_support, log_density
from .exceptions import UnsupportedParametersError
from .quadrature import QuadratureConfig
from .uncertainty import _excess_integral, _log_gm_discrete
from .escort import as_distribution
from .validation import SMALL

__all__ = [
    "EntropyKind",
    "EntropySpec",
    "entropy_from_components",
    "entropy_discrete",
    "entropy_continuous",
    "shannon_continuous",
    "closed_form_entropy",
    "entropy_sweep",
    "SHANNON_CLASSICAL_BELOW",
]

#: Distribution couplings below this use the classical Shannon closed forms.
SHANNON_CLASSICAL_BELOW = 0.005


class EntropyKind(str, enum.Enum):
    SHANNON = "shannon"
    RENYI = "renyi"
    TSALLIS = "tsallis"
    NORMALIZED_TSALLIS = "normalized_tsallis"
    COUPLED = "coupled"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_").replace(" ", "_")
        aliases = {"nt": "normalized_tsallis", "normalizedtsallis": "normalized_tsallis"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class EntropySpec:
    """Entropy kind together with the coupling that sets its triple."""

    kind: EntropyKind
    coupling: Coupling = Coupling(0.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "kind", EntropyKind.parse(self.kind))

    @classmethod
    def of(cls, kind, kappa=0.0, alpha=1.0):
        return cls(EntropyKind.parse(kind), Coupling(kappa, alpha))

    @property
    def moment(self):
        if self.kind is EntropyKind.SHANNON:
            return 0.0
        return self.coupling.moment

    @property
    def power(self):
        m = self.coupling.moment
        if self.kind is EntropyKind.TSALLIS:
            return m
        if self.kind in (EntropyKind.COUPLED, EntropyKind.NORMALIZED_TSALLIS):
            return -m
        return 0.0

    @property
    def norm(self):
        c = self.coupling
        if self.kind is EntropyKind.COUPLED:
            return -c.alpha * c.kappa
        if self.kind is EntropyKind.TSALLIS:
            return c.moment
        if self.kind is EntropyKind.NORMALIZED_TSALLIS:
            return -c.moment
        return 0.0

    def triple(self):
        """``(moment, power, norm)``."""
        return self.moment, self.power, self.norm


def _from_log_gm(log_gm, spec):
    power, norm = spec.power, spec.norm
    if abs(power) < SMALL or abs(norm) < SMALL:
        return -log_gm
    return -math.expm1(power * log_gm) / norm


def entropy_from_components(generalized_mean, spec):
    """Apply ``-(GM**power - 1)/norm`` (or ``-ln GM`` in the limit)."""
    gm = float(generalized_mean)
    if not gm > 0:
        raise ValueError("generalized mean must be positive")
    return _from_log_gm(math.log(gm), spec)


def entropy_discrete(p, spec):
    """Entropy of a discrete distribution.

    Examples
    --------
    >>> round(entropy_discrete([0.5, 0.5], EntropySpec.of("shannon")), 6)
    0.693147
    """
    p = as_distribution(p).probs
    return _from_log_gm(_log_gm_discrete(p, spec.moment), spec)


def shannon_continuous(params, cfg=None):
    """Differential Shannon entropy ``-integral f ln f``.

    Below ``SHANNON_CLASSICAL_BELOW`` (and at or above 0) the exponential /
    Gaussian closed forms are used. Otherwise heavy tails are truncated at
    the tabulated tail limit, falling back to the analytic transform
    outside the table.
    """
    k = params.kappa
    if 0.0 <= k < SHANNON_CLASSICAL_BELOW:
        if params.alpha == 1:
            return 1.0 + math.log(params.sigma)
        return 0.5 * math.log(2.0 * math.pi * math.e) + math.log(params.sigma)
    if cfg is None:
        cfg = QuadratureConfig(tail_policy="table58")

    def integrand(x):
        logf = np.asarray(log_density(params, x), dtype=float)
        f = np.exp(logf)
        return np.where(f > 1e-300, f * logf, 0.0)

    res = integrate_over_support(
        params, integrand, cfg, even=params.alpha == 2, kappa_tail=k if k > 0 else None
    )
    return -res.value


def entropy_continuous(params, spec, cfg=None):
    """Entropy of a coupled density.

    Shannon integrates ``-f ln f`` with the tail-limit table. The other kinds
    integrate ``(f**(1+m) - f)/m`` on the analytic-transform policy and apply
    the same transform as the discrete case.

    Raises
    ------
    DivergentEscortError
        If ``f**(1+m)`` is not integrable.
    """
    if spec.kind is EntropyKind.SHANNON:
        return shannon_continuous(params, cfg)
    m = spec.moment
    excess = _excess_integral(params, m, cfg)
    if abs(m) < SMALL:
        return -excess
    return _from_log_gm(math.log1p(m * excess) / m, spec)


def _gaussian_scale_term(kappa, sigma):
    # (kappa pi**kappa)**(1/(1+kappa)) * (sigma Gamma(1/(2k)) / Gamma((1+k)/(2k)))**(2k/(1+k))
    k = kappa
    log_ratio = math.log(sigma) + special.gammaln(0.5 / k) - special.gammaln(0.5 * (1.0 + k) / k)
    return math.exp(
        (math.log(k) + k * math.log(math.pi)) / (1.0 + k) + 2.0 * k / (1.0 + k) * log_ratio
    )


def closed_form_entropy(params, kind):
    """Matched-coupling closed forms for the coupled families.

    The entropy coupling equals the distribution coupling and its alpha the
    family index. For alpha=1::

        coupled            (-1 + (1+k) s**(k/(1+k))) / k
        tsallis            (1 + k - s**(-k/(1+k))) / k
        normalized_tsallis (1+k) * coupled

    For alpha=2, with ``G = (k pi**k)**(1/(1+k)) (s Gamma(1/2k)/Gamma((1+k)/2k))**(2k/(1+k))``::

        coupled            (-k + (1+k) G) / (2 k**2)
        tsallis            (1 + 1/k - 1/G) / 2
        normalized_tsallis (1+k) * coupled
    """
    kind = EntropyKind.parse(kind)
    k, s = params.kappa, params.sigma
    if not k > 0:
        raise UnsupportedParametersError("closed forms need kappa > 0")
    if kind not in (EntropyKind.COUPLED, EntropyKind.TSALLIS, EntropyKind.NORMALIZED_TSALLIS):
        raise UnsupportedParametersError(f"no closed form for {kind.value} entropy")
    if params.alpha == 1:
        k1 = k / (1.0 + k)
        if kind is EntropyKind.TSALLIS:
            return (1.0 + k - s ** (-k1)) / k
        coupled = (-1.0 + (1.0 + k) * s**k1) / k
    else:
        g = _gaussian_scale_term(k, s)
        if kind is EntropyKind.TSALLIS:
            return 0.5 * (1.0 + 1.0 / k - 1.0 / g)
        coupled = (-k + (1.0 + k) * g) / (2.0 * k * k)
    if kind is EntropyKind.NORMALIZED_TSALLIS:
        return (1.0 + k) * coupled
    return coupled


ALL_KINDS = tuple(EntropyKind)


def entropy_sweep(alpha, sigmas, kappas, kinds=ALL_KINDS, mu=0.0, cfg=None):
    """Matched-coupling entropies over a ``sigma x kappa x kind`` grid.

    Returns
    -------
    list of dict
        Rows ``{alpha, sigma, kappa, kind, entropy}`` in grid order.
    """
    kinds = [EntropyKind.parse(k) for k in kinds]
    rows = []
    for s in sigmas:
        for k in kappas:
            params = CoupledDensityParams(mu=mu, sigma=float(s), kappa=float(k), alpha=int(alpha))
            for kind in kinds:
                spec = EntropySpec(kind, Coupling(float(k), float(alpha)))
                value = entropy_continuous(params, spec, cfg)
                rows.append(
                    {
                        "alpha": int(alpha),
                        "sigma": float(s),
                        "kappa": float(k),
                        "kind": kind.value,
                        "entropy": value,
                    }
                )
    return rows
