"""Nonlinear statistical coupling.

Coupled (kappa-deformed) algebra, the coupled exponential and coupled
Gaussian families, escort probabilities, the coupled average uncertainty and
five entropy functionals built on it.
"""

from .algebra import (
    Coupling,
    coupled_add,
    coupled_exp,
    coupled_exp_alpha,
    coupled_exp_general,
    coupled_log,
    coupled_log_alpha,
    coupled_power,
    coupled_product,
    coupled_subtract,
    coupled_surprisal,
)
from .distributions import (
    CoupledDensityParams,
    cdf,
    density,
    gamma_mixing_density,
    log_density,
    normalization,
    sample,
    superstatistics_mixture,
)
from .entropy import (
    EntropyKind,
    EntropySpec,
    closed_form_entropy,
    entropy_continuous,
    entropy_discrete,
    entropy_from_components,
    entropy_sweep,
)
from .escort import (
    DiscreteDistribution,
    coupled_density_transform,
    coupled_moment_continuous,
    coupled_moment_discrete,
    coupled_probability,
)
from .estimators import CoupledDensityEstimator, CoupledEntropyTransformer, EscortTransformer
from .exceptions import (
    DivergentEscortError,
    DomainError,
    InvalidCouplingError,
    NormalizationError,
    NSCError,
    OutOfTableError,
    QuadratureError,
    SingularDilationError,
    UnsupportedParametersError,
)
from .quadrature import QuadratureConfig, integrate, tail_limit_for
from .uncertainty import (
    coupled_average_uncertainty_continuous,
    coupled_average_uncertainty_discrete,
    coupled_log_average,
    uncertainty_sweep,
    weighted_generalized_mean,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
