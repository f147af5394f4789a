import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nsc.algebra import Coupling
from nsc.distributions import CoupledDensityParams, density
from nsc.escort import (
    DiscreteDistribution,
    coupled_density_transform,
    coupled_moment_continuous,
    coupled_moment_discrete,
    coupled_probability,
    escort_normalizer,
)
from nsc.exceptions import DivergentEscortError, NormalizationError, UnsupportedParametersError
from nsc.quadrature import integrate


def distributions(max_size=20):
    raw = arrays(np.float64, st.integers(1, max_size), elements=st.floats(1e-3, 1.0))
    return raw.map(lambda a: a / a.sum())


class TestDiscreteDistribution:
    def test_drops_zeros(self):
        assert DiscreteDistribution([0.5, 0.0, 0.5]).probs.tolist() == [0.5, 0.5]

    def test_rejects_bad_sum(self):
        with pytest.raises(NormalizationError):
            DiscreteDistribution([0.5, 0.6])

    def test_renormalize(self):
        assert DiscreteDistribution([1.0, 3.0], renormalize=True).probs.tolist() == [0.25, 0.75]

    @pytest.mark.parametrize("bad", [[], [-0.1, 1.1], [math.nan, 1.0], [0.0, 0.0]])
    def test_rejects_invalid(self, bad):
        with pytest.raises(ValueError):
            DiscreteDistribution(bad)

    def test_tolerance(self):
        DiscreteDistribution([0.5, 0.5 + 5e-10])
        with pytest.raises(NormalizationError):
            DiscreteDistribution([0.5, 0.5 + 5e-9])

    def test_read_only(self):
        d = DiscreteDistribution([0.5, 0.5])
        with pytest.raises(ValueError):
            d.probs[0] = 1.0
        assert len(d) == 2
        assert np.asarray(d).tolist() == [0.5, 0.5]


class TestCoupledProbability:
    def test_example(self):
        out = coupled_probability([0.5, 0.3, 0.2], Coupling(1.0)).probs
        oracle = np.array([0.5, 0.3, 0.2]) ** 1.5
        np.testing.assert_allclose(out, oracle / oracle.sum(), rtol=1e-12)
        np.testing.assert_allclose(out, [0.582160, 0.270564, 0.147276], atol=1e-6)

    @given(st.integers(1, 30), st.floats(-0.9, 5.0), st.sampled_from([1.0, 2.0]))
    def test_uniform_fixed_point(self, n, k, a):
        out = coupled_probability(np.full(n, 1.0 / n), Coupling(k, a)).probs
        np.testing.assert_allclose(out, 1.0 / n, rtol=1e-12)

    @given(distributions())
    def test_zero_coupling_is_identity(self, p):
        np.testing.assert_allclose(coupled_probability(p, Coupling(0.0)).probs, p, rtol=1e-12)

    @given(distributions(), st.floats(0.0, 5.0), st.sampled_from([1.0, 2.0]))
    def test_normalized_and_order_preserving(self, p, k, a):
        out = coupled_probability(p, Coupling(k, a)).probs
        assert math.fsum(out) == pytest.approx(1.0, abs=1e-12)
        # weak monotonicity: ties within rounding may swap order
        order = np.argsort(p, kind="stable")
        assert np.all(np.diff(out[order]) >= -1e-15)

    def test_extreme_exponent_is_stable(self):
        out = coupled_probability([1e-300 / (1 + 1e-300), 1 / (1 + 1e-300)], Coupling(50.0, 2.0)).probs
        assert np.all(np.isfinite(out)) and out[1] == pytest.approx(1.0)


class TestCoupledDensity:
    def test_zero_metric_is_identity(self):
        p = CoupledDensityParams(kappa=0.5)
        assert coupled_density_transform(p, Coupling(0.0), 0.7) == density(p, 0.7)

    def test_escort_of_gpd_is_gpd(self):
        # f**1.5 for GPD(kappa=1, sigma=1) renormalizes to GPD(1/2, 1/2), value 2 at 0
        p = CoupledDensityParams(kappa=1.0)
        assert coupled_density_transform(p, Coupling(1.0), 0.0) == pytest.approx(2.0, rel=1e-9)
        escort = CoupledDensityParams(sigma=0.5, kappa=0.5)
        xs = np.linspace(0.0, 10.0, 11)
        np.testing.assert_allclose(
            coupled_density_transform(p, Coupling(1.0), xs), density(escort, xs), rtol=1e-9
        )

    @pytest.mark.parametrize("k", [0.1, 0.5, 1.0, 2.0])
    @pytest.mark.parametrize("a", [1, 2])
    def test_normalized(self, k, a):
        p = CoupledDensityParams(kappa=k, alpha=a)
        c = Coupling(k, a)
        lo = 0.0 if a == 1 else -math.inf
        total = integrate(lambda x: coupled_density_transform(p, c, x), lo, math.inf).value
        assert total == pytest.approx(1.0, abs=1e-7)

    def test_divergent(self):
        with pytest.raises(DivergentEscortError):
            escort_normalizer(CoupledDensityParams(kappa=1.0), Coupling(-0.5))


class TestMoments:
    def test_discrete_examples(self):
        assert coupled_moment_discrete([0, 1], [0.8, 0.2], 1, 1.0) == pytest.approx(1 / 9)
        assert coupled_moment_discrete([0, 1], [0.5, 0.5], 1, 3.0) == pytest.approx(0.5)

    @given(distributions(), st.integers(1, 3))
    def test_discrete_zero_coupling(self, p, n):
        xs = np.arange(p.size, dtype=float)
        assert coupled_moment_discrete(xs, p, n, 0.0) == pytest.approx(float(np.dot(p, xs**n)), rel=1e-12)

    def test_discrete_zero_states_aligned(self):
        assert coupled_moment_discrete([5.0, 0.0, 1.0], [0.0, 0.8, 0.2], 1, 1.0) == pytest.approx(1 / 9)

    def test_discrete_errors(self):
        with pytest.raises(ValueError):
            coupled_moment_discrete([0, 1], [0.5, 0.5], 0, 1.0)
        with pytest.raises(ValueError):
            coupled_moment_discrete([0, 1, 2], [0.5, 0.5], 1, 1.0)

    def test_continuous_examples(self):
        assert coupled_moment_continuous(CoupledDensityParams(kappa=0.3), 1) == pytest.approx(1.0, rel=1e-6)
        g = CoupledDensityParams(sigma=2.0, kappa=0.5, alpha=2)
        assert coupled_moment_continuous(g, 2) == pytest.approx(4.0, rel=1e-5)
        assert coupled_moment_continuous(CoupledDensityParams(sigma=3.0), 1) == pytest.approx(3.0, rel=1e-9)

    def test_about_location(self):
        p = CoupledDensityParams(mu=5.0, sigma=2.0, kappa=0.4)
        assert coupled_moment_continuous(p, 1) == pytest.approx(2.0, rel=1e-6)

    def test_continuous_unsupported(self):
        with pytest.raises(UnsupportedParametersError):
            coupled_moment_continuous(CoupledDensityParams(kappa=0.5), 2)
        with pytest.raises(UnsupportedParametersError):
            coupled_moment_continuous(CoupledDensityParams(kappa=-0.5), 1)
