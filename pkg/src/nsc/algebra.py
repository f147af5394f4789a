"""Coupled (kappa-deformed) arithmetic, exponential, logarithm, product and power.

All functions accept scalars or numpy arrays and return a float for scalar
input. Deformed formulas are evaluated through ``log1p``/``expm1`` so that
they join the classical limit smoothly; below ``SMALL`` the classical limit
is returned outright.

Sign convention: ``ln_{alpha,kappa}(x) = (x**(alpha*kappa/(1+kappa)) - 1) / (alpha*kappa)``.
Every other logarithm (surprisal, ``ln_{-alpha,kappa}``) is derived from it.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, SingularDilationError
from .validation import SMALL, check_alpha, check_kappa

__all__ = [
    "Coupling",
    "coupled_add",
    "coupled_subtract",
    "coupled_exp",
    "coupled_exp_general",
    "coupled_exp_alpha",
    "coupled_log",
    "coupled_log_alpha",
    "coupled_product",
    "coupled_power",
    "coupled_surprisal",
]


@dataclass(frozen=True)
class Coupling:
    """Nonlinear statistical coupling ``kappa`` with stability index ``alpha``.

    Attributes
    ----------
    kappa : float
        Coupling, must exceed -1. Positive values give heavy tails, values in
        (-1, 0) compact support.
    alpha : float
        Positive power of the state variable (1 for exponential, 2 for
        Gaussian-type families).
    """

    kappa: float
    alpha: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kappa", check_kappa(self.kappa))
        object.__setattr__(self, "alpha", check_alpha(self.alpha))

    @property
    def moment(self):
        """Generalized-mean moment ``alpha * kappa / (1 + kappa)``."""
        return self.alpha * self.kappa / (1.0 + self.kappa)

    @property
    def kappa1(self):
        """Multiplicative coupling ``kappa / (1 + kappa)``."""
        return self.kappa / (1.0 + self.kappa)

    @property
    def q(self):
        """Equivalent Tsallis index / Renyi order ``1 + moment``."""
        return 1.0 + self.moment


def _out(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def _deformed_power(base_m1, exponent):
    """``(1 + base_m1)_+ ** exponent`` with the divergence convention.

    A nonpositive base gives 0 for a positive exponent and +inf for a
    negative one.
    """
    base_m1 = np.asarray(base_m1, dtype=float)
    exponent = np.asarray(exponent, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        inside = base_m1 > -1.0
        safe = np.where(inside, base_m1, 0.0)
        value = np.exp(exponent * np.log1p(safe))
        edge = np.where(exponent > 0, 0.0, np.inf)
        edge = np.where(exponent == 0, 1.0, edge)
        return np.where(inside, value, edge)


def coupled_add(x, y, kappa):
    """Coupled sum ``x + y + kappa * x * y``."""
    kappa = check_kappa(kappa)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return _out(x + y + kappa * (x * y))


def coupled_subtract(x, y, kappa):
    """Coupled difference ``(x - y) / (1 + kappa * y)``, the inverse of ``coupled_add``."""
    kappa = check_kappa(kappa)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    denom = 1.0 + kappa * y
    if np.any(denom == 0):
        raise SingularDilationError("1 + kappa * y is zero")
    return _out((x - y) / denom)


def coupled_exp(x, kappa):
    """Coupled exponential ``(1 + kappa * x)_+ ** (1/kappa + 1)``.

    For ``-1 < kappa < 0`` the exponent is negative, so points with
    ``1 + kappa * x <= 0`` return ``inf`` instead of 0.
    """
    kappa = check_kappa(kappa)
    x = np.asarray(x, dtype=float)
    if abs(kappa) < SMALL:
        return _out(np.exp(x))
    return _out(_deformed_power(kappa * x, (1.0 + kappa) / kappa))


def coupled_exp_general(x, c, sign=-1):
    """Coupled exponential raised to ``sign / alpha``.

    ``sign=+1`` gives ``exp_kappa(x) ** (1/alpha)``; ``sign=-1`` gives the
    density kernel ``exp_kappa(x) ** (-1/alpha)`` of the coupled families.

    Parameters
    ----------
    x : float or array-like
    c : Coupling
    sign : {+1, -1}

    Returns
    -------
    float or ndarray
        Nonnegative value, ``inf`` where the kernel diverges.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    x = np.asarray(x, dtype=float)
    kappa, alpha = c.kappa, c.alpha
    if abs(kappa) < SMALL:
        return _out(np.exp(sign * x / alpha))
    return _out(_deformed_power(kappa * x, sign * (1.0 + kappa) / (alpha * kappa)))


def coupled_exp_alpha(x, c):
    """Two-parameter exponential ``(1 + alpha*kappa*x)_+ ** ((1/alpha)(1/kappa + 1))``."""
    x = np.asarray(x, dtype=float)
    kappa, alpha = c.kappa, c.alpha
    if abs(kappa) < SMALL:
        return _out(np.exp(x))
    return _out(_deformed_power(alpha * kappa * x, (1.0 + kappa) / (alpha * kappa)))


def _log_ak(x, alpha, kappa):
    # (x**(alpha*kappa/(1+kappa)) - 1) / (alpha*kappa); alpha may be negative here
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("coupled logarithm requires x > 0")
    if abs(alpha * kappa) < SMALL:
        return np.log(x)
    m = alpha * kappa / (1.0 + kappa)
    return np.expm1(m * np.log(x)) / (alpha * kappa)


def coupled_log(x, kappa):
    """Coupled logarithm ``(x**(kappa/(1+kappa)) - 1) / kappa`` for ``x > 0``."""
    kappa = check_kappa(kappa)
    return _out(_log_ak(x, 1.0, kappa))


def coupled_log_alpha(x, c):
    """``ln_{alpha,kappa}(x) = (x**(alpha*kappa/(1+kappa)) - 1) / (alpha*kappa)``."""
    return _out(_log_ak(x, c.alpha, c.kappa))


def coupled_surprisal(p, c):
    """Coupled surprisal ``-ln_{-alpha,kappa}(p) = (p**(-m) - 1) / (alpha*kappa)``.

    Reduces to ``-ln p`` as kappa goes to 0. Values ``p > 1`` are accepted
    so densities can be passed.
    """
    return _out(-_log_ak(p, -c.alpha, c.kappa))


def coupled_product(values, kappa1):
    """Coupled product ``(sum(x_i**kappa1) - (N - 1))_+ ** (1/kappa1)``.

    ``kappa1`` is a multiplicative coupling such as ``kappa/(1+kappa)`` or
    ``-alpha*kappa/(1+kappa)``; it is not range-checked.

    Examples
    --------
    >>> coupled_product([4.0, 9.0], 0.5)
    16.0
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("values must be a nonempty 1-D sequence")
    if np.any(~(x > 0)):
        raise DomainError("coupled product requires positive values")
    kappa1 = float(kappa1)
    logs = np.log(x)
    if abs(kappa1) < SMALL:
        return float(np.exp(np.sum(logs)))
    s = np.sum(np.expm1(kappa1 * logs))
    return float(_deformed_power(s, 1.0 / kappa1))


def coupled_power(x, a, kappa1):
    """Coupled power ``(a * x**kappa1 - (a - 1))_+ ** (1/kappa1)`` for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("coupled power requires x > 0")
    a = np.asarray(a, dtype=float)
    kappa1 = float(kappa1)
    if abs(kappa1) < SMALL:
        return _out(np.power(x, a))
    t = kappa1 * np.log(x)
    near = _deformed_power(a * np.expm1(t), 1.0 / kappa1)
    # far from x**kappa1 = 1 the base itself carries more digits than base - 1
    base = a * np.exp(t) - (a - 1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        far = np.where(base > 0, np.power(np.where(base > 0, base, 1.0), 1.0 / kappa1), 0.0 if kappa1 > 0 else np.inf)
    return _out(np.where(np.abs(t) < 0.5, near, far))
