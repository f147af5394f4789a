"""Grid data behind the four figures, as rows of plain dicts.

Each builder returns ``(columns, rows)`` with rows in deterministic grid
order. No plotting happens here.
"""

from .algebra import Coupling
from .distributions import CoupledDensityParams, density
from .entropy import ALL_KINDS, entropy_sweep
from .uncertainty import (
    FIGURE2_METRIC_KAPPAS,
    coupled_average_uncertainty_continuous,
    default_dist_kappas,
    uncertainty_sweep,
)

__all__ = [
    "FIGURE1_KAPPAS",
    "FIGURE34_SIGMAS",
    "figure34_kappas",
    "figure1_rows",
    "figure2_rows",
    "figure34_rows",
    "figure_rows",
]

FIGURE1_KAPPAS = {
    1: (-2.0 / 3.0, -1.0 / 3.0, 0.0, 0.5, 1.0, 2.0),
    # the coupled Gaussian is only normalized for kappa >= 0
    2: (0.0, 0.5, 1.0, 2.0),
}
FIGURE34_SIGMAS = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0)


def figure34_kappas(step=0.1, upper=2.0):
    """Couplings ``0, step, ..., upper`` rounded to ten decimals."""
    n = int(round(upper / step))
    return [round(i * step, 10) for i in range(n + 1)]


def _x_grid(lo, hi, step):
    n = int(round((hi - lo) / step))
    return [round(lo + i * step, 10) for i in range(n + 1)]


def figure1_rows(kappas=None, sigma=1.0, mu=0.0, step=0.05, x_max=5.0):
    """Density curves with their coupled average uncertainty.

    Columns: ``alpha, kappa, sigma, x, density, average_uncertainty``. The
    last column is constant along each curve and equals ``f(mu + sigma)``.
    """
    columns = ["alpha", "kappa", "sigma", "x", "density", "average_uncertainty"]
    rows = []
    for alpha in (1, 2):
        ks = FIGURE1_KAPPAS[alpha] if kappas is None else [k for k in kappas if alpha == 1 or k >= 0]
        xs = _x_grid(mu, mu + x_max, step) if alpha == 1 else _x_grid(mu - x_max, mu + x_max, step)
        for k in ks:
            params = CoupledDensityParams(mu=mu, sigma=sigma, kappa=float(k), alpha=alpha)
            avg = coupled_average_uncertainty_continuous(params, Coupling(float(k), alpha))
            for x in xs:
                rows.append(
                    {
                        "alpha": alpha,
                        "kappa": float(k),
                        "sigma": float(sigma),
                        "x": x,
                        "density": density(params, x),
                        "average_uncertainty": avg,
                    }
                )
    return columns, rows


def figure2_rows(dist_kappas=None, metric_kappas=None, sigma=1.0, mu=0.0, scale="coupled-moment"):
    """Coupled average uncertainty of coupled Gaussians across couplings."""
    columns = [
        "metric_kappa",
        "dist_kappa",
        "sigma",
        "dist_sigma",
        "moment",
        "average_uncertainty",
        "density_at_width",
        "matched_value",
    ]
    rows = uncertainty_sweep(
        default_dist_kappas() if dist_kappas is None else dist_kappas,
        FIGURE2_METRIC_KAPPAS if metric_kappas is None else metric_kappas,
        sigma=sigma,
        mu=mu,
        scale=scale,
    )
    return columns, rows


def figure34_rows(alpha, sigmas=None, kappas=None, kinds=ALL_KINDS, mu=0.0):
    """Entropies of the alpha=1 (figure 3) or alpha=2 (figure 4) family."""
    columns = ["alpha", "sigma", "kappa", "kind", "entropy"]
    rows = entropy_sweep(
        alpha,
        FIGURE34_SIGMAS if sigmas is None else sigmas,
        figure34_kappas() if kappas is None else kappas,
        kinds=kinds,
        mu=mu,
    )
    return columns, rows


def figure_rows(figure, **overrides):
    """Dispatch on the figure number (1 to 4)."""
    figure = int(figure)
    if figure == 1:
        return figure1_rows(**overrides)
    if figure == 2:
        return figure2_rows(**overrides)
    if figure in (3, 4):
        return figure34_rows(figure - 2, **overrides)
    raise ValueError(f"figure must be 1, 2, 3 or 4, got {figure}")

