import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from specdecay.lattice import LatticeCube
from specdecay.sampling import (
    DecayProfile,
    Gaussian,
    ParetoSymmetric,
    SiteDistribution,
    StreamSpec,
    Uniform,
    law_from_dict,
    sample_potential,
)


class PointMass(SiteDistribution):
    """Degenerate law at 1, only used to expose the decay weights."""

    def ppf(self, u):
        return np.ones_like(np.asarray(u, dtype=float))


def pareto_density(delta):
    return lambda x: 0.5 * delta * abs(x) ** (-1 - delta) if abs(x) > 1 else 0.0


def test_pareto_cdf_by_quadrature():
    mass, _ = integrate.quad(pareto_density(1.0), 1, 2)
    assert ParetoSymmetric(1.0).cdf(2.0) == pytest.approx(0.5 + mass, abs=1e-12)
    assert ParetoSymmetric(1.0).cdf(2.0) == pytest.approx(0.75, abs=1e-15)


@pytest.mark.parametrize("delta", [0.3, 1.0, 2.5])
def test_pareto_total_mass(delta):
    f = pareto_density(delta)
    tail, _ = integrate.quad(f, 1, np.inf)
    assert 2 * tail == pytest.approx(1.0, abs=1e-8)


def test_pareto_cdf_flat_gap():
    assert ParetoSymmetric(1.0).cdf(0.0) == 0.5
    assert ParetoSymmetric(2.0).cdf(-1.0) == 0.5


def test_survival_examples():
    assert ParetoSymmetric(1.0).survival(100.0) == 0.005
    assert ParetoSymmetric(0.5).survival(4.0) == 0.25
    for law in (ParetoSymmetric(1.0), Uniform(0, 1), Gaussian(0, 1)):
        assert law.survival(-np.inf) == pytest.approx(1.0)


def test_survival_stays_accurate_deep_in_the_tail():
    # 1 - cdf would underflow to 0 here
    assert ParetoSymmetric(2.0).survival(1e10) == pytest.approx(0.5e-20, rel=1e-14)


@pytest.mark.parametrize("delta,u,expected", [(1.0, 0.75, 2.0), (1.0, 0.25, -2.0), (2.0, 0.875, 2.0)])
def test_inverse_cdf_examples(delta, u, expected):
    assert ParetoSymmetric(delta).sample(u) == pytest.approx(expected, rel=1e-15)


def test_half_goes_to_positive_branch():
    assert ParetoSymmetric(1.0).sample(0.5) == 1.0


@pytest.mark.parametrize("u", [0.0, 1.0, -0.1, 1.5])
def test_sample_rejects_out_of_range(u):
    with pytest.raises(ValueError):
        ParetoSymmetric(1.0).sample(u)


@given(st.floats(1e-9, 1 - 1e-9), st.floats(0.2, 5.0))
def test_pareto_round_trip(u, delta):
    law = ParetoSymmetric(delta)
    x = law.sample(u)
    assert abs(x) >= 1
    assert law.cdf(x) == pytest.approx(u, abs=1e-12)


@given(st.floats(1e-6, 1 - 1e-6))
def test_finite_variance_round_trips(u):
    for law in (Uniform(-1, 3), Gaussian(0.5, 2.0)):
        assert law.cdf(law.sample(u)) == pytest.approx(u, abs=1e-12)


@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_cdf_is_monotone(s, t):
    lo, hi = min(s, t), max(s, t)
    for law in (ParetoSymmetric(0.7), Uniform(0, 1), Gaussian()):
        assert law.cdf(lo) <= law.cdf(hi)


def test_second_moments():
    assert ParetoSymmetric(3.0).second_moment == 3.0
    assert ParetoSymmetric(2.0).second_moment == np.inf
    assert ParetoSymmetric(1.0).second_moment == np.inf
    assert Uniform(0, 1).second_moment == pytest.approx(1 / 3)
    assert Gaussian(1, 2).second_moment == 5


def test_monte_carlo_second_moment():
    law = ParetoSymmetric(3.0)
    x = law.sample(StreamSpec(20240601).uniforms(10**6))
    sq = x**2
    se = sq.std(ddof=1) / np.sqrt(sq.size)
    assert abs(sq.mean() - 3.0) <= 5 * se


def test_monte_carlo_tail_fraction():
    x = ParetoSymmetric(1.0).sample(StreamSpec(99, 3).uniforms(10**6))
    frac = np.mean(x > 2)
    se = np.sqrt(0.25 * 0.75 / x.size)
    assert abs(frac - 0.25) <= 5 * se


def test_law_from_dict():
    assert law_from_dict({"kind": "uniform", "a": 0, "b": 1}) == Uniform(0.0, 1.0)
    assert law_from_dict({"kind": "pareto_symmetric", "delta": 2}) == ParetoSymmetric(2.0)
    with pytest.raises(ValueError, match="unknown law"):
        law_from_dict({"kind": "cauchy"})


class TestStreams:
    def test_values_inside_open_interval(self):
        u = StreamSpec(0, 0).uniforms(100_000)
        assert np.all((u > 0) & (u < 1))

    def test_repeatable(self):
        a = StreamSpec(7, 3).uniforms(1000)
        b = StreamSpec(7, 3).uniforms(1000)
        assert np.array_equal(a, b)

    def test_trials_differ(self):
        assert not np.array_equal(StreamSpec(7, 0).uniforms(10), StreamSpec(7, 1).uniforms(10))

    @given(st.integers(0, 500), st.integers(1, 50))
    def test_random_access_matches_full_stream(self, start, count):
        full = StreamSpec(123, 4).uniforms(start + count)
        assert np.array_equal(StreamSpec(123, 4).uniforms(count, start=start), full[start:])

    def test_large_and_negative_seeds(self):
        assert np.array_equal(StreamSpec(-1).uniforms(5), StreamSpec(2**64 - 1).uniforms(5))


def test_potential_at_origin_is_raw_sample():
    cube = LatticeCube(0, 1)
    law = ParetoSymmetric(1.0)
    stream = StreamSpec(5, 0)
    v = sample_potential(cube, DecayProfile(alpha=2.0), law, stream)
    assert v.tolist() == [law.sample(stream.uniforms(1)[0])]


def test_potential_weights():
    v = sample_potential(LatticeCube(1, 1), DecayProfile(alpha=1.0), PointMass(), StreamSpec(0))
    assert v.tolist() == [0.5, 1.0, 0.5]


def test_potential_is_deterministic():
    args = (LatticeCube(3, 2), DecayProfile(0.5), Gaussian(), StreamSpec(11, 2))
    assert np.array_equal(sample_potential(*args), sample_potential(*args))


def test_custom_weights():
    cube = LatticeCube(1, 1)
    v = sample_potential(cube, DecayProfile(custom_weights=[2.0, 0.0, -1.0]), PointMass(), StreamSpec(0))
    assert v.tolist() == [2.0, 0.0, -1.0]
    with pytest.raises(ValueError):
        DecayProfile(custom_weights=[1.0, np.nan])
    with pytest.raises(ValueError):
        DecayProfile(custom_weights=[1.0]).weights(cube)
