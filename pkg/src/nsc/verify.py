"""Invariant suites behind ``nsc verify``.

Each suite returns a list of :class:`CheckResult`; a check passes when its
observed maximum error is within tolerance. Random inputs come from fixed
seeds so reports are reproducible.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import algebra as alg
from .algebra import Coupling
from .distributions import (
    CoupledDensityParams,
    cdf,
    density,
    gamma_mixing_density,
    sample,
    superstatistics_mixture,
)
from .entropy import (
    EntropyKind,
    EntropySpec,
    closed_form_entropy,
    entropy_continuous,
    entropy_discrete,
    entropy_sweep,
)
from .escort import coupled_moment_continuous, coupled_probability
from .quadrature import integrate
from .uncertainty import (
    FIGURE2_METRIC_KAPPAS,
    coupled_average_uncertainty_continuous,
    coupled_average_uncertainty_discrete,
    coupled_log_average,
    default_dist_kappas,
    sweep_extremum,
    uncertainty_sweep,
    weighted_generalized_mean,
)

SEED = 20240531

#: Absolute tolerance used where a closed form is exactly zero.
ZERO_ABS_TOL = 1e-12

THEOREM1_KAPPAS = {
    1: [-0.5, -0.25] + [round(0.1 * i, 1) for i in range(1, 21)],
    2: [round(0.1 * i, 1) for i in range(1, 21)],
}
THEOREM1_SIGMAS = (0.5, 1.0, 2.0)
LEMMA1_KAPPAS = [round(0.1 * i, 1) for i in range(0, 11)]
CLOSED_FORM_KAPPAS = [round(0.1 * i, 1) for i in range(1, 21)]
CLOSED_FORM_SIGMAS = (0.25, 0.5, 1.0, 2.0)
SUPERSTAT_X = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)
SUPERSTAT_KAPPAS = (0.25, 0.5, 1.0)
FIGURE_SIGMAS = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0)
FIGURE_KAPPAS = [round(0.1 * i, 1) for i in range(0, 21)]
SAMPLER_CASES = (
    CoupledDensityParams(sigma=1.0, kappa=0.5, alpha=1),
    CoupledDensityParams(sigma=1.0, kappa=1.0, alpha=1),
    CoupledDensityParams(sigma=1.0, kappa=0.5, alpha=2),
)


@dataclass
class CheckResult:
    name: str
    max_error: float
    tolerance: float
    passed: bool = field(init=False)
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.max_error <= self.tolerance)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name:<48s} max_err={self.max_error:.3e}  tol={self.tolerance:.1e}"
        if self.detail:
            text += f"  ({self.detail})"
        return text


def _rel(a, b):
    return abs(a - b) / abs(b)


def _random_distribution(rng, n_max=20):
    n = int(rng.integers(2, n_max + 1))
    p = rng.random(n) + 1e-3
    return p / p.sum()


# ---------------------------------------------------------------- algebra


def check_inverse_pair(n=2000):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(n):
        k = float(rng.uniform(-0.9, 10.0))
        x = float(rng.uniform(-5.0, 5.0))
        if 1.0 + k * x <= 1e-3:
            continue
        y = alg.coupled_log(alg.coupled_exp(x, k), k)
        worst = max(worst, abs(y - x) / (1.0 + abs(x)))
    return CheckResult("inverse pair ln_k(exp_k(x)) = x", worst, 1e-10)


def check_small_kappa():
    xs = np.linspace(-2.0, 2.0, 41)
    worst = 0.0
    for k in np.concatenate([np.geomspace(1e-6, 1e-3, 13), -np.geomspace(1e-6, 1e-3, 13)]):
        # second-order expansions in kappa; the remainder is O(kappa**3)
        log_exp = xs + k * (xs - 0.5 * xs**2) + k * k * (xs**3 / 3.0 - 0.5 * xs**2)
        log_series = xs + k * (0.5 * xs**2 - xs) + k * k * (xs - xs**2 + xs**3 / 6.0)
        e = np.abs(np.log(np.asarray(alg.coupled_exp(xs, k))) - log_exp)
        g = np.abs(np.asarray(alg.coupled_log(np.exp(xs), k)) - log_series)
        worst = max(worst, float(np.max(e / (1.0 + np.abs(xs)))), float(np.max(g / (1.0 + np.abs(xs)))))
    # the threshold itself must not introduce a jump
    jump = 0.0
    for x in xs:
        below = alg.coupled_exp(x, 0.99e-10)
        above = alg.coupled_exp(x, 1.01e-10)
        jump = max(jump, abs(below / above - 1.0))
        yb = alg.coupled_log(math.exp(x), 0.99e-10)
        ya = alg.coupled_log(math.exp(x), 1.01e-10)
        jump = max(jump, abs(yb - ya) / (1.0 + abs(x)))
    return [
        CheckResult("small-kappa expansion agreement", worst, 1e-6),
        CheckResult("no jump at the small-kappa threshold", jump, 1e-9),
    ]


def check_unit_integral():
    worst = 0.0
    for k in (-0.5, 0.0, 0.5, 1.0, 2.0):
        res = integrate(lambda x, k=k: alg.coupled_log(1.0 / x, k), 0.0, 1.0)
        worst = max(worst, abs(res.value - 1.0))
    return CheckResult("unit integral of ln_k(1/x) over (0,1]", worst, 1e-8)


def check_exp_alpha_identity():
    worst = 0.0
    for k in (-0.5, -0.2, 0.1, 0.5, 1.0, 3.0):
        for a in (0.5, 1.0, 1.5, 2.0, 3.0):
            c = Coupling(k, a)
            for x in np.linspace(-0.9, 4.0, 25):
                lhs = alg.coupled_exp_general(x, c, sign=1)
                rhs = alg.coupled_exp_alpha(x / a, c)
                if lhs == 0.0 and rhs == 0.0:
                    continue
                if math.isinf(lhs) and math.isinf(rhs):
                    continue
                worst = max(worst, _rel(lhs, rhs))
    return CheckResult("exp_k^(1/a)(x) = exp_(a,k)(x/a)", worst, 1e-12)


def check_homomorphisms(n=500):
    rng = np.random.default_rng(SEED + 1)
    worst_log = worst_prod = worst_lnprod = 0.0
    for _ in range(n):
        k = float(rng.uniform(0.05, 3.0))
        N = int(rng.integers(2, 6))
        xs = rng.uniform(0.0, 2.0, N)
        # ln_k of the ordinary product equals the coupled sum
        prod = float(np.prod([alg.coupled_exp(x, k) for x in xs]))
        csum = xs[0]
        for x in xs[1:]:
            csum = alg.coupled_add(csum, x, k)
        worst_log = max(worst_log, abs(alg.coupled_log(prod, k) - csum) / (1.0 + abs(csum)))
        # coupled product of coupled exponentials is exp_k of the sum
        lhs = alg.coupled_product([alg.coupled_exp(x, k) for x in xs], k / (1.0 + k))
        worst_prod = max(worst_prod, _rel(lhs, alg.coupled_exp(float(xs.sum()), k)))
        # ln_k of the coupled product is the ordinary sum of ln_k
        ys = rng.uniform(0.2, 3.0, N)
        cprod = alg.coupled_product(ys, k / (1.0 + k))
        if not cprod > 0:
            # the truncated product left the domain of ln_k
            continue
        lhs = alg.coupled_log(cprod, k)
        rhs = float(np.sum(alg.coupled_log(ys, k)))
        worst_lnprod = max(worst_lnprod, abs(lhs - rhs) / (1.0 + abs(rhs)))
    return [
        CheckResult("ln_k(prod exp_k x_i) = coupled sum", worst_log, 1e-10),
        CheckResult("coupled product of exp_k = exp_k(sum)", worst_prod, 1e-10),
        CheckResult("ln_k(coupled product) = sum ln_k", worst_lnprod, 1e-10),
    ]


def check_coupled_power_log(n=1000):
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(n):
        k = float(rng.uniform(0.05, 3.0))
        a = float(rng.choice([1.0, 2.0]))
        b = float(rng.uniform(0.0, 1.0))
        x = float(rng.uniform(1e-3, 1.0))
        c = Coupling(k, a)
        lhs = -b * alg.coupled_surprisal(x, c)
        powered = alg.coupled_power(x, b, -c.moment)
        rhs = -alg.coupled_surprisal(powered, c)
        worst = max(worst, abs(lhs - rhs))
    return CheckResult("b ln_(-a,k)(x) = ln_(-a,k)(x^(x)b)", worst, 1e-10)


def check_coupled_add(n=1000):
    rng = np.random.default_rng(SEED + 3)
    worst_assoc = worst_comm = 0.0
    for _ in range(n):
        k = float(rng.uniform(-0.9, 5.0))
        x, y, z = rng.uniform(-1.0, 1.0, 3)
        left = alg.coupled_add(alg.coupled_add(x, y, k), z, k)
        right = alg.coupled_add(x, alg.coupled_add(y, z, k), k)
        scale = 1.0 + abs(left)
        worst_assoc = max(worst_assoc, abs(left - right) / scale)
        worst_comm = max(worst_comm, abs(alg.coupled_add(x, y, k) - alg.coupled_add(y, x, k)))
    return [
        CheckResult("coupled addition associative", worst_assoc, 1e-12),
        CheckResult("coupled addition commutative", worst_comm, 1e-12),
    ]


def suite_algebra():
    out = [check_inverse_pair()]
    out += check_small_kappa()
    out.append(check_unit_integral())
    out.append(check_exp_alpha_identity())
    out += check_homomorphisms()
    out.append(check_coupled_power_log())
    out += check_coupled_add()
    return out


# ---------------------------------------------------------------- theorem 1


def suite_theorem1():
    worst = 0.0
    cells = 0
    for alpha, kappas in THEOREM1_KAPPAS.items():
        for k in kappas:
            for s in THEOREM1_SIGMAS:
                params = CoupledDensityParams(sigma=s, kappa=k, alpha=alpha)
                avg = coupled_average_uncertainty_continuous(params, Coupling(k, alpha))
                target = density(params, params.mu + s)
                worst = max(worst, _rel(avg, target))
                cells += 1
    anchors = 0.0
    for s in THEOREM1_SIGMAS:
        e = coupled_average_uncertainty_continuous(CoupledDensityParams(sigma=s), Coupling(0.0))
        g = coupled_average_uncertainty_continuous(
            CoupledDensityParams(sigma=s, alpha=2), Coupling(0.0, 2)
        )
        anchors = max(anchors, abs(e - 1.0 / (s * math.e)), abs(g - 1.0 / (math.sqrt(2 * math.pi * math.e) * s)))
    return [
        CheckResult("average uncertainty = f(mu + sigma)", worst, 1e-6, f"{cells} cells"),
        CheckResult("exponential/Gaussian average density", anchors, 1e-8),
    ]


# ---------------------------------------------------------------- lemma 1


def suite_lemma1():
    worst = 0.0
    for k in LEMMA1_KAPPAS:
        for s in (0.5, 1.0, 2.0):
            m1 = coupled_moment_continuous(CoupledDensityParams(sigma=s, kappa=k, alpha=1), 1)
            m2 = coupled_moment_continuous(CoupledDensityParams(sigma=s, kappa=k, alpha=2), 2)
            worst = max(worst, _rel(m1, s), _rel(m2, s * s))
    return [CheckResult("coupled moments recover sigma, sigma^2", worst, 1e-5)]


# ---------------------------------------------------------------- lemma 2


def suite_lemma2(n=1000):
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for _ in range(n):
        N = int(rng.integers(1, 12))
        x = rng.uniform(0.05, 5.0, N)
        w = rng.random(N) + 1e-3
        w = w / w.sum()
        c = Coupling(float(rng.uniform(-0.9, 5.0)), float(rng.choice([1.0, 2.0])))
        a = coupled_log_average(x, w, c)
        b = weighted_generalized_mean(x, w, c.moment)
        worst = max(worst, _rel(a, b))
    rep = 0.0
    for _ in range(200):
        p = _random_distribution(rng)
        c = Coupling(float(rng.uniform(0.05, 3.0)), float(rng.choice([1.0, 2.0])))
        weights = coupled_probability(p, c).probs
        powered = [alg.coupled_power(pi, wi, -c.moment) for pi, wi in zip(p, weights)]
        via_product = alg.coupled_product(powered, -c.moment)
        rep = max(rep, _rel(via_product, coupled_average_uncertainty_discrete(p, c)))
    return [
        CheckResult("coupled-log average = generalized mean", worst, 1e-12, f"{n} cases"),
        CheckResult("coupled product/power representation", rep, 1e-10),
    ]


# ---------------------------------------------------------------- closed forms


def suite_closedforms():
    worst = 0.0
    for alpha in (1, 2):
        for k in CLOSED_FORM_KAPPAS:
            for s in CLOSED_FORM_SIGMAS:
                params = CoupledDensityParams(sigma=s, kappa=k, alpha=alpha)
                for kind in (EntropyKind.COUPLED, EntropyKind.TSALLIS, EntropyKind.NORMALIZED_TSALLIS):
                    cf = closed_form_entropy(params, kind)
                    q = entropy_continuous(params, EntropySpec(kind, Coupling(k, alpha)))
                    # relative error is undefined where the closed form vanishes
                    err = abs(cf - q) / abs(cf) if cf != 0.0 else abs(q) * 1e-6 / ZERO_ABS_TOL
                    worst = max(worst, err)
    exact = 0.0
    for k in CLOSED_FORM_KAPPAS:
        params = CoupledDensityParams(sigma=1.0, kappa=k, alpha=1)
        exact = max(
            exact,
            abs(closed_form_entropy(params, "coupled") - 1.0),
            abs(closed_form_entropy(params, "tsallis") - 1.0),
            abs(closed_form_entropy(params, "normalized_tsallis") - (1.0 + k)),
        )
    return [
        CheckResult("closed forms vs quadrature", worst, 1e-6),
        CheckResult("alpha=1, sigma=1 values 1, 1, 1+kappa", exact, 1e-10),
    ]


# ---------------------------------------------------------------- superstatistics


def suite_superstat():
    worst = 0.0
    for k in SUPERSTAT_KAPPAS:
        for x in SUPERSTAT_X:
            mix = superstatistics_mixture(k, 1.0, x)
            worst = max(worst, abs(mix - density(CoupledDensityParams(kappa=k), x)))
    mom = 0.0
    for k in SUPERSTAT_KAPPAS:
        for s in (0.5, 1.0, 2.0):
            total = integrate(lambda b: gamma_mixing_density(k, s, b), 0.0, math.inf).value
            mean = integrate(lambda b: b * gamma_mixing_density(k, s, b), 0.0, math.inf).value
            mom = max(mom, abs(total - 1.0), abs(mean - 1.0 / s))
    return [
        CheckResult("gamma mixture = coupled exponential", worst, 1e-8, "18 points"),
        CheckResult("mixing density normalization and mean", mom, 1e-8),
    ]


# ---------------------------------------------------------------- entropy relations


def suite_entropy(n=1000):
    rng = np.random.default_rng(SEED + 5)
    chain = appx = tsallis_form = collapse = 0.0
    negative = 0
    for i in range(n):
        p = _random_distribution(rng)
        k = (0.1, 0.5, 1.0, 2.0)[i % 4]
        a = (1.0, 2.0)[(i // 4) % 2]
        c = Coupling(k, a)
        m = c.moment
        s = float(np.sum(p ** (1.0 + m)))
        sc = entropy_discrete(p, EntropySpec(EntropyKind.COUPLED, c))
        snt = entropy_discrete(p, EntropySpec(EntropyKind.NORMALIZED_TSALLIS, c))
        st = entropy_discrete(p, EntropySpec(EntropyKind.TSALLIS, c))
        chain = max(chain, abs(sc - snt / (1.0 + k)), abs(sc - st / ((1.0 + k) * s)))
        weights = coupled_probability(p, c).probs
        escort_sum = float(np.dot(weights, alg.coupled_surprisal(p, c)))
        appx = max(appx, abs(sc - escort_sum))
        lhs = -(1.0 + k) * float(np.dot(p ** (1.0 + m), -np.asarray(alg.coupled_surprisal(p, c))))
        rhs = -(1.0 + k) * alg.coupled_log_alpha(s ** (1.0 / m), c)
        tsallis_form = max(tsallis_form, abs(lhs - rhs), abs(lhs - st))
        for kind in EntropyKind:
            if entropy_discrete(p, EntropySpec(kind, c)) < 0:
                negative += 1
    for _ in range(200):
        p = _random_distribution(rng)
        h = entropy_discrete(p, EntropySpec(EntropyKind.SHANNON))
        for kind in EntropyKind:
            for a in (1.0, 2.0):
                collapse = max(collapse, abs(entropy_discrete(p, EntropySpec(kind, Coupling(1e-6, a))) - h))
    return [
        CheckResult("S_C = S_NT/(1+k) = S_T/((1+k) sum p^(1+m))", chain, 1e-12),
        CheckResult("S_C = escort-weighted coupled surprisal", appx, 1e-12),
        CheckResult("Tsallis as coupled-log transform", tsallis_form, 1e-12),
        CheckResult("all kinds -> Shannon at kappa=1e-6", collapse, 1e-5),
        CheckResult("nonnegative on discrete inputs", float(negative), 0.0),
    ]


# ---------------------------------------------------------------- figures


def suite_figure2():
    rows = uncertainty_sweep(default_dist_kappas(), FIGURE2_METRIC_KAPPAS)
    out = []
    for mk in FIGURE2_METRIC_KAPPAS:
        ext = sweep_extremum(rows, mk)
        at = ext["argmin"] if ext["character"] == "minimum" else ext["argmax"]
        target = density(CoupledDensityParams(kappa=mk, alpha=2), 1.0)
        # an extremum away from the match point counts as a failure
        err = _rel(ext["match_value"], target) if abs(at - mk) < 0.005 else math.inf
        out.append(
            CheckResult(f"metric {mk}: extremum at match, value f(mu+sigma)", err, 1e-6, ext["character"])
        )
    return out


def suite_figures34():
    out = []
    for alpha in (1, 2):
        rows = entropy_sweep(alpha, FIGURE_SIGMAS, FIGURE_KAPPAS)
        table = {(r["kind"], r["kappa"], r["sigma"]): r["entropy"] for r in rows}
        violations = 0
        for kind in EntropyKind:
            for k in FIGURE_KAPPAS:
                vals = [table[(kind.value, k, s)] for s in FIGURE_SIGMAS]
                violations += sum(1 for u, v in zip(vals, vals[1:]) if not v > u)
        out.append(CheckResult(f"alpha={alpha}: every kind increases with sigma", float(violations), 0.0))
        if alpha == 1:
            flat = max(abs(table[("coupled", k, 1.0)] - 1.0) for k in FIGURE_KAPPAS)
            out.append(CheckResult("alpha=1, sigma=1 coupled entropy = 1", flat, 1e-10))
    return out


# ---------------------------------------------------------------- sampler


def suite_sampler():
    out = []
    for i, params in enumerate(SAMPLER_CASES):
        xs = sample(params, 100_000, SEED + i)
        ks = stats.kstest(xs, lambda x, p=params: cdf(p, x)).statistic
        out.append(
            CheckResult(f"KS alpha={params.alpha} kappa={params.kappa}", float(ks), 0.006)
        )
    params = CoupledDensityParams(sigma=1.0, kappa=0.5, alpha=1)
    mean = float(np.mean(sample(params, 1_000_000, SEED)))
    out.append(CheckResult("GPD mean sigma/(1-kappa), kappa=0.5", abs(mean - 2.0) / 2.0, 0.01))
    return out


SUITES = {
    "algebra": suite_algebra,
    "theorem1": suite_theorem1,
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "closedforms": suite_closedforms,
    "superstat": suite_superstat,
    "entropy": suite_entropy,
    "figure2": suite_figure2,
    "figures34": suite_figures34,
    "sampler": suite_sampler,
}


def run_suite(name):
    """Run one suite (or ``"all"``) and return ``[(suite, CheckResult), ...]``."""
    names = list(SUITES) if name == "all" else [name]
    results = []
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}")
        for r in SUITES[n]():
            results.append((n, r))
    return results
