"""Input validation helpers used by the functional API and the estimators."""

import math

import numpy as np

from .exceptions import InvalidCouplingError, NormalizationError

#: Below this magnitude a coupling (or moment) is treated as exactly zero and
#: the classical limit is evaluated instead of the deformed 0/0 form.
SMALL = 1e-10

#: Tolerance on |sum(p) - 1| for probability vectors.
SUM_TOL = 1e-9


def check_kappa(kappa):
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa <= -1.0:
        raise InvalidCouplingError(f"kappa must be a finite real > -1, got {kappa!r}")
    return kappa


def check_alpha(alpha):
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise InvalidCouplingError(f"alpha must be a finite positive real, got {alpha!r}")
    return alpha


def check_probabilities(probs, renormalize=False, tol=SUM_TOL):
    """Validate a discrete distribution and drop zero-probability states.

    Parameters
    ----------
    probs : array-like, shape (n,)
        Nonnegative probabilities.
    renormalize : bool, optional
        Divide by the sum instead of rejecting a vector whose sum is off by
        more than `tol`.
    tol : float, optional
        Allowed deviation of the sum from one.

    Returns
    -------
    ndarray
        Strictly positive probabilities summing to one.

    Raises
    ------
    ValueError
        On non-finite or negative entries, wrong shape, or an all-zero vector.
    NormalizationError
        When the sum deviates from one and `renormalize` is false.
    """
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1:
        raise ValueError("probabilities must be a 1-D array")
    if p.size == 0:
        raise ValueError("probabilities must contain at least one state")
    if not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite")
    if np.any(p < 0):
        raise ValueError("probabilities must be nonnegative")
    p = p[p > 0]
    if p.size == 0:
        raise ValueError("at least one probability must be positive")
    total = math.fsum(p)
    if abs(total - 1.0) > tol:
        if not renormalize:
            raise NormalizationError(
                f"probabilities sum to {total!r}; pass renormalize=True to rescale"
            )
        p = p / total
    return p


def check_weights(weights, n=None, tol=1e-12):
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or (n is not None and w.size != n):
        raise ValueError("weights must be a 1-D array matching the values")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    if abs(math.fsum(w) - 1.0) > tol:
        raise NormalizationError(f"weights sum to {math.fsum(w)!r}, expected 1")
    return w


def check_positive(values, name="values"):
    x = np.asarray(values, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError(f"{name} must be strictly positive")
    return x


def check_probability_rows(X, renormalize=False):
    """Validate a 2-D array whose rows are distributions; zeros are kept."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[np.newaxis, :]
    if X.ndim != 2:
        raise ValueError("expected a 2-D array of probability rows")
    if not np.all(np.isfinite(X)) or np.any(X < 0):
        raise ValueError("probability rows must be finite and nonnegative")
    sums = X.sum(axis=1)
    if np.any(sums <= 0):
        raise ValueError("every row needs at least one positive entry")
    if np.any(np.abs(sums - 1.0) > SUM_TOL):
        if not renormalize:
            raise NormalizationError("rows do not sum to one; set renormalize=True")
        X = X / sums[:, np.newaxis]
    return X
