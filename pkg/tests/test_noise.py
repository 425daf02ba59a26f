"""Jump-noise models: closed-form statistics, Gillespie sampling, and
generator validation."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm
from scipy.stats import binom

from noisykitaev.errors import NoiseModelError, ReducibleGeneratorError
from noisykitaev.noise import (
    JumpNoise,
    autocorrelation,
    constant,
    discretized_gaussian,
    noise_statistics,
    sample_autocorrelation,
    sample_trajectory,
    stationary_distribution,
    telegraph,
)


class TestClosedFormStatistics:
    def test_telegraph(self):
        stats = noise_statistics(telegraph(-0.3, 0.9, 2.0))
        assert stats.mean == pytest.approx(0.3, abs=1e-12)
        assert stats.variance == pytest.approx(0.36, abs=1e-12)
        assert stats.corr_time == pytest.approx(0.25, abs=1e-12)

    def test_telegraph_autocorrelation_is_exponential(self):
        noise = telegraph(-0.3, 0.9, 2.0)
        taus = np.array([0.0, 0.1, 0.25, 1.0])
        expected = 0.36 * np.exp(-taus / 0.25)
        assert np.allclose(autocorrelation(noise, taus), expected, atol=1e-12)
        assert autocorrelation(noise, 0.25) == pytest.approx(0.36 / np.e)
        # autocovariance is even in the lag
        assert autocorrelation(noise, -0.4) == autocorrelation(noise, 0.4)

    def test_discretized_gaussian(self):
        noise = discretized_gaussian(0.7, 0.2, 1.5, n_fluctuators=8)
        stats = noise_statistics(noise)
        assert stats.mean == pytest.approx(0.7, abs=1e-12)
        assert stats.variance == pytest.approx(0.04, abs=1e-12)
        assert stats.corr_time == pytest.approx(1.5, abs=1e-10)
        taus = np.linspace(0.0, 4.0, 9)
        expected = 0.04 * np.exp(-taus / 1.5)
        assert np.allclose(autocorrelation(noise, taus), expected, atol=1e-12)

    def test_binomial_stationary_distribution(self):
        noise = discretized_gaussian(0.0, 1.0, 1.0, n_fluctuators=6)
        p = stationary_distribution(noise)
        assert np.allclose(p, binom.pmf(np.arange(7), 6, 0.5), atol=1e-10)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)

    def test_single_fluctuator_is_telegraph(self):
        a = discretized_gaussian(0.3, 0.5, 2.0, n_fluctuators=1, initial_state=0)
        b = telegraph(0.3 - 0.5, 0.3 + 0.5, 0.5 / 2.0, initial_state=0)
        assert np.allclose(a.values, b.values, atol=1e-15)
        assert np.allclose(a.generator, b.generator, atol=1e-15)
        assert a.initial_state == b.initial_state

    def test_constant_process(self):
        noise = constant(1.3)
        assert noise.n_states == 1
        assert np.array_equal(stationary_distribution(noise), [1.0])
        stats = noise_statistics(noise)
        assert stats.mean == 1.3
        assert stats.variance == 0.0
        assert stats.corr_time == np.inf
        assert autocorrelation(noise, 2.0) == 0.0

    def test_zero_amplitude_telegraph_allowed(self):
        stats = noise_statistics(telegraph(0.4, 0.4, 1.0))
        assert stats.variance < 1e-30


class TestGillespieSampling:
    def test_same_key_reproduces_identical_path(self):
        noise = telegraph(0.0, 1.0, 1.5)
        a = sample_trajectory(noise, 50.0, seed=3, index=7)
        b = sample_trajectory(noise, 50.0, seed=3, index=7)
        assert np.array_equal(a.times, b.times)
        assert np.array_equal(a.states, b.states)
        c = sample_trajectory(noise, 50.0, seed=3, index=8)
        assert not np.array_equal(a.times, c.times)

    def test_switch_count_is_poisson(self):
        # switching events form a Poisson process at the exit rate
        noise = telegraph(0.0, 1.0, 1.0)
        path = sample_trajectory(noise, 200.0, seed=5)
        assert abs(path.n_switches - 200.0) < 4.0 * np.sqrt(200.0)
        assert np.all(path.states[1:] != path.states[:-1])

    def test_state_at_lookup(self):
        noise = telegraph(0.0, 1.0, 1.0, initial_state=1)
        path = sample_trajectory(noise, 10.0, seed=0)
        assert path.state_at(0.0) == 1
        t_mid = 0.5 * (path.times[1] + (path.times[2] if path.n_switches > 1 else 10.0))
        assert path.state_at(float(t_mid)) == path.states[1]

    def test_constant_never_switches(self):
        path = sample_trajectory(constant(2.0), 100.0, seed=1)
        assert path.n_switches == 0

    def test_stationary_start_when_unpinned(self):
        # initial_state=None draws from the stationary law
        noise = telegraph(0.0, 1.0, 1.0, initial_state=None)
        starts = [sample_trajectory(noise, 0.0, seed=2, index=i).states[0] for i in range(200)]
        assert abs(np.mean(starts) - 0.5) < 4.0 * 0.5 / np.sqrt(200.0)

    def test_sampled_autocorrelation_matches_analytic(self):
        noise = discretized_gaussian(0.0, 0.6, 1.0, n_fluctuators=4)
        taus = np.array([0.0, 1.0, 2.0])
        est, se = sample_autocorrelation(noise, taus, n_paths=600, seed=9)
        assert np.all(se > 0.0)
        assert np.all(np.abs(est - autocorrelation(noise, taus)) < 4.0 * se)


class TestValidation:
    def test_telegraph_rate_must_be_positive(self):
        with pytest.raises(NoiseModelError, match="rate must be positive"):
            telegraph(0.0, 1.0, 0.0)

    def test_gaussian_parameter_checks(self):
        with pytest.raises(NoiseModelError, match="sigma"):
            discretized_gaussian(0.0, -0.1, 1.0)
        with pytest.raises(NoiseModelError, match="corr_time"):
            discretized_gaussian(0.0, 0.1, 0.0)
        with pytest.raises(NoiseModelError, match="n_fluctuators"):
            discretized_gaussian(0.0, 0.1, 1.0, n_fluctuators=0)

    def test_generator_shape_and_sign_checks(self):
        with pytest.raises(NoiseModelError, match="generator shape"):
            JumpNoise(np.array([0.0, 1.0]), np.zeros((3, 3)), 0)
        gen = np.array([[-1.0, -0.5], [1.0, 0.5]])
        with pytest.raises(NoiseModelError, match="negative transition rate"):
            JumpNoise(np.array([0.0, 1.0]), gen, 0)
        gen = np.array([[-1.0, 0.0], [0.5, 0.0]])
        with pytest.raises(NoiseModelError, match="sum to zero"):
            JumpNoise(np.array([0.0, 1.0]), gen, 0)
        with pytest.raises(NoiseModelError, match="out of range"):
            telegraph(0.0, 1.0, 1.0, initial_state=2)

    def test_reducible_generator_reports_components(self):
        gen = np.zeros((4, 4))
        gen[:2, :2] = [[-1.0, 1.0], [1.0, -1.0]]
        gen[2:, 2:] = [[-2.0, 2.0], [2.0, -2.0]]
        noise = JumpNoise(np.arange(4.0), gen, 0)
        with pytest.raises(ReducibleGeneratorError) as err:
            stationary_distribution(noise)
        assert err.value.components == [[0, 1], [2, 3]]

    def test_sampling_argument_checks(self):
        noise = telegraph(0.0, 1.0, 1.0)
        with pytest.raises(NoiseModelError, match="t_max"):
            sample_trajectory(noise, -1.0, seed=0)
        with pytest.raises(NoiseModelError, match="nonnegative"):
            sample_trajectory(noise, 1.0, seed=-1)
        with pytest.raises(NoiseModelError, match="lags"):
            sample_autocorrelation(noise, [-0.5], n_paths=4, seed=0)
        with pytest.raises(NoiseModelError, match="two paths"):
            sample_autocorrelation(noise, [0.0], n_paths=1, seed=0)


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(min_value=-2.0, max_value=2.0),
    b=st.floats(min_value=-2.0, max_value=2.0),
    rate=st.floats(min_value=0.05, max_value=20.0),
)
def test_telegraph_stationarity(a, b, rate):
    noise = telegraph(a, b, rate)
    p = stationary_distribution(noise)
    assert np.all(p >= 0.0)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(noise.generator @ p)) < 1e-12 * max(rate, 1.0)
    stats = noise_statistics(noise)
    assert autocorrelation(noise, 0.0) == pytest.approx(stats.variance, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    nr=st.integers(min_value=1, max_value=12),
    sigma=st.floats(min_value=0.0, max_value=3.0),
    corr_time=st.floats(min_value=0.1, max_value=10.0),
)
def test_gaussian_lattice_matches_target_moments(nr, sigma, corr_time):
    noise = discretized_gaussian(0.5, sigma, corr_time, n_fluctuators=nr)
    stats = noise_statistics(noise)
    assert stats.mean == pytest.approx(0.5, abs=1e-9)
    assert stats.variance == pytest.approx(sigma**2, rel=1e-9, abs=1e-12)
    # relaxation is exponential at every order: expm reproduces the
    # stationary projector at long times
    prop = expm(noise.generator * (40.0 * corr_time))
    p = stationary_distribution(noise)
    assert np.max(np.abs(prop - p[:, None])) < 1e-9
