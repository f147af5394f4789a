"""scikit-learn compatible wrappers.

Rows of ``X`` are discrete distributions for the two transformers. The
density estimator treats ``X`` as a single column of observations.
"""

import math

import numpy as np
from scipy import optimize
from sklearn.base import BaseEstimator, DensityMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .algebra import Coupling
from .distributions import CoupledDensityParams, log_density, sample
from .entropy import EntropyKind, EntropySpec, _from_log_gm
from .escort import escort_power
from .uncertainty import _log_gm_discrete
from .validation import check_probability_rows

__all__ = ["EscortTransformer", "CoupledEntropyTransformer", "CoupledDensityEstimator"]


class _RowTransformer(TransformerMixin, BaseEstimator):
    def _check_rows(self, X, reset):
        X = check_array(X, dtype=np.float64)
        if reset:
            self.n_features_in_ = X.shape[1]
        elif X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but {type(self).__name__} "
                f"was fitted with {self.n_features_in_}"
            )
        return check_probability_rows(X, renormalize=self.renormalize)

    def fit(self, X, y=None):
        """Validate ``X`` and record its width."""
        Coupling(self.kappa, self.alpha)
        self._check_rows(X, reset=True)
        return self


class EscortTransformer(_RowTransformer):
    """Map each distribution to its coupled (escort) probabilities.

    Parameters
    ----------
    kappa : float, default=0.0
    alpha : float, default=1.0
    renormalize : bool, default=False
        Rescale rows that do not sum to one instead of raising.

    Examples
    --------
    >>> EscortTransformer(kappa=1.0).fit_transform([[0.5, 0.5]]).tolist()
    [[0.5, 0.5]]
    """

    def __init__(self, kappa=0.0, alpha=1.0, renormalize=False):
        self.kappa = kappa
        self.alpha = alpha
        self.renormalize = renormalize

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = self._check_rows(X, reset=False)
        exponent = 1.0 + Coupling(self.kappa, self.alpha).moment
        out = np.zeros_like(X)
        for i, row in enumerate(X):
            mask = row > 0
            out[i, mask] = escort_power(row[mask], exponent)
        return out


class CoupledEntropyTransformer(_RowTransformer):
    """Per-row coupled average uncertainty and entropy.

    ``transform`` returns an ``(n_samples, 2)`` array with columns
    ``[average_uncertainty, entropy]``.

    Parameters
    ----------
    kind : str, default="coupled"
        One of shannon, renyi, tsallis, normalized_tsallis, coupled.
    kappa, alpha : float
    renormalize : bool, default=False
    """

    def __init__(self, kind="coupled", kappa=0.0, alpha=1.0, renormalize=False):
        self.kind = kind
        self.kappa = kappa
        self.alpha = alpha
        self.renormalize = renormalize

    def fit(self, X, y=None):
        EntropyKind.parse(self.kind)
        return super().fit(X, y)

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = self._check_rows(X, reset=False)
        spec = EntropySpec(EntropyKind.parse(self.kind), Coupling(self.kappa, self.alpha))
        out = np.empty((X.shape[0], 2))
        for i, row in enumerate(X):
            log_gm = _log_gm_discrete(row[row > 0], spec.moment)
            out[i, 0] = math.exp(log_gm)
            out[i, 1] = _from_log_gm(log_gm, spec)
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(["average_uncertainty", "entropy"], dtype=object)


class CoupledDensityEstimator(DensityMixin, BaseEstimator):
    """Maximum-likelihood location and scale at a fixed coupling.

    Parameters
    ----------
    kappa : float, default=0.0
    alpha : {1, 2}, default=1

    Attributes
    ----------
    mu_, sigma_ : float
        Fitted location and scale.
    params_ : CoupledDensityParams
    """

    def __init__(self, kappa=0.0, alpha=1):
        self.kappa = kappa
        self.alpha = alpha

    def _column(self, X):
        X = check_array(X, dtype=np.float64, ensure_2d=False)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValueError("CoupledDensityEstimator expects a single feature")
            X = X[:, 0]
        return X

    def fit(self, X, y=None):
        x = self._column(X)
        if x.size < 2:
            raise ValueError("need at least two observations")
        self.n_features_in_ = 1
        base = CoupledDensityParams(kappa=self.kappa, alpha=self.alpha)
        k = base.kappa

        def nll(mu, log_sigma):
            ll = log_density(base.replace(mu=mu, sigma=math.exp(log_sigma)), x)
            total = float(np.sum(ll))
            return -total if math.isfinite(total) else math.inf

        if base.alpha == 1:
            mu = float(x.min())
            span = float(x.max()) - mu
            # compact support needs mu - sigma/kappa >= max(x)
            lo = math.log(-k * span * (1.0 + 1e-12)) if k < 0 and span > 0 else None
            start = math.log(max(float(np.mean(x - mu)), 1e-300))
            if lo is None:
                res = optimize.minimize_scalar(lambda t: nll(mu, t), bracket=(start - 1.0, start))
            else:
                res = optimize.minimize_scalar(lambda t: nll(mu, t), bounds=(lo, lo + 20.0), method="bounded")
            log_sigma = float(res.x)
        else:
            med = float(np.median(x))
            mad = float(np.median(np.abs(x - med))) or float(np.std(x)) or 1.0
            res = optimize.minimize(
                lambda v: nll(v[0], v[1]), x0=[med, math.log(mad)], method="Nelder-Mead",
                options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000},
            )
            mu, log_sigma = float(res.x[0]), float(res.x[1])
        self.mu_ = mu
        self.sigma_ = math.exp(log_sigma)
        self.params_ = base.replace(mu=self.mu_, sigma=self.sigma_)
        return self

    def score_samples(self, X):
        """Log density of each observation."""
        check_is_fitted(self, "params_")
        return np.asarray(log_density(self.params_, self._column(X)), dtype=float)

    def score(self, X, y=None):
        """Mean log-likelihood."""
        return float(np.mean(self.score_samples(X)))

    def sample(self, n_samples=1, random_state=0):
        """Draw from the fitted density; ``random_state`` must be an integer seed."""
        check_is_fitted(self, "params_")
        return sample(self.params_, n_samples, int(random_state))[:, np.newaxis]
