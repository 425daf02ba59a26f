"""Classical Markovian jump processes driving the wire parameters.

A process is a finite-state Markov chain with generator ``L`` (columns sum
to zero, ``L[m, n]`` = rate n -> m) and a real value ``X_m`` per state. Two
families are provided:

* ``telegraph(a, b, rate)``: two states, symmetric switching, variance
  ``(a - b)^2 / 4`` and correlation time ``1 / (2 rate)``.
* ``discretized_gaussian(mean, sigma, corr_time, n_fluctuators)``: the sum
  of ``N_r`` independent telegraphs collapsed onto ``N_r + 1`` lattice
  states ``X_m = (N_r - m) a' + m b'`` with ``a',b' = mean/N_r -+
  sigma/sqrt(N_r)``; binomial stationary distribution, exactly exponential
  autocorrelation, Gaussian one-point statistics as ``N_r`` grows. With
  ``n_fluctuators = 1`` it reduces to ``telegraph(mean - sigma,
  mean + sigma, rate)`` field for field.

Both have autocorrelation ``sigma^2 exp(-|tau| / tau_c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm
from scipy.sparse.csgraph import connected_components

from .errors import NoiseModelError, ReducibleGeneratorError

__all__ = [
    "JumpNoise",
    "NoiseStatistics",
    "NoiseTrajectory",
    "telegraph",
    "discretized_gaussian",
    "constant",
    "stationary_distribution",
    "autocorrelation",
    "noise_statistics",
    "sample_trajectory",
    "sample_autocorrelation",
]

_GEN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class JumpNoise:
    """Finite-state Markov jump process with one parameter value per state.

    ``initial_state`` is the index the process starts from; None means a
    draw from the stationary distribution.
    """

    values: np.ndarray
    generator: np.ndarray
    initial_state: int | None = None

    def __post_init__(self):
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        gen = np.asarray(self.generator, dtype=float)
        m = values.size
        if gen.shape != (m, m):
            raise NoiseModelError(f"generator shape {gen.shape} != ({m}, {m})")
        if not (np.isfinite(values).all() and np.isfinite(gen).all()):
            raise NoiseModelError("non-finite noise parameters")
        off = gen - np.diag(np.diag(gen))
        if off.min() < -_GEN_TOL:
            raise NoiseModelError("negative transition rate in generator")
        scale = max(float(np.max(np.abs(gen))), 1.0)
        if np.max(np.abs(gen.sum(axis=0))) > _GEN_TOL * scale:
            raise NoiseModelError("generator columns must sum to zero")
        if self.initial_state is not None and not 0 <= self.initial_state < m:
            raise NoiseModelError(f"initial_state {self.initial_state} out of range")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "generator", gen)

    @property
    def n_states(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class NoiseStatistics:
    mean: float
    variance: float
    corr_time: float


@dataclass(frozen=True, eq=False)
class NoiseTrajectory:
    """Piecewise-constant realization: state ``states[i]`` holds on
    ``[times[i], times[i+1])`` and the last segment runs to ``t_max``."""

    times: np.ndarray
    states: np.ndarray
    t_max: float

    def state_at(self, t: float) -> int:
        idx = int(np.searchsorted(self.times, t, side="right")) - 1
        return int(self.states[max(idx, 0)])

    @property
    def n_switches(self) -> int:
        return self.times.size - 1


def telegraph(a: float, b: float, rate: float, initial_state: int | None = 0) -> JumpNoise:
    """Symmetric two-state process jumping between values ``a`` and ``b``.

    Defaults to starting in state 0 (value ``a``). ``a == b`` is allowed and
    gives a zero-amplitude (noise-free) process.
    """
    if rate <= 0:
        raise NoiseModelError(f"telegraph rate must be positive, got {rate}")
    gen = np.array([[-rate, rate], [rate, -rate]], dtype=float)
    return JumpNoise(np.array([a, b], dtype=float), gen, initial_state)


def discretized_gaussian(
    mean: float,
    sigma: float,
    corr_time: float,
    n_fluctuators: int = 64,
    initial_state: int | None = None,
) -> JumpNoise:
    """Birth-death lattice of ``N_r`` pooled telegraph fluctuators.

    State m holds ``m`` fluctuators at the upper value; rates are
    ``L[m+1, m] = (N_r - m) kappa`` and ``L[m-1, m] = m kappa`` with
    ``kappa = 1 / (2 corr_time)``. Values ascend with m.
    """
    if sigma < 0:
        raise NoiseModelError("sigma must be nonnegative")
    if corr_time <= 0:
        raise NoiseModelError("corr_time must be positive")
    if n_fluctuators < 1:
        raise NoiseModelError("n_fluctuators must be >= 1")
    nr = int(n_fluctuators)
    kappa = 0.5 / corr_time
    lo = mean / nr - sigma / math.sqrt(nr)
    hi = mean / nr + sigma / math.sqrt(nr)
    m = np.arange(nr + 1, dtype=float)
    values = (nr - m) * lo + m * hi
    gen = np.zeros((nr + 1, nr + 1))
    for k in range(nr + 1):
        if k < nr:
            gen[k + 1, k] = (nr - k) * kappa
        if k > 0:
            gen[k - 1, k] = k * kappa
        gen[k, k] = -nr * kappa
    return JumpNoise(values, gen, initial_state)


def constant(value: float = 0.0) -> JumpNoise:
    """Single frozen state; turns any noisy backend into closed evolution."""
    return JumpNoise(np.array([value]), np.zeros((1, 1)), 0)


def stationary_distribution(noise: JumpNoise) -> np.ndarray:
    """Unique probability vector with ``L p = 0``.

    Raises ReducibleGeneratorError when the chain has more than one closed
    communicating class (the stationary state is then not unique).
    """
    gen = noise.generator
    if noise.n_states == 1:
        return np.ones(1)
    adj = (gen - np.diag(np.diag(gen))) > 0
    n_comp, labels = connected_components(adj, directed=True, connection="strong")
    if n_comp > 1:
        comps = [np.flatnonzero(labels == c).tolist() for c in range(n_comp)]
        raise ReducibleGeneratorError(comps)
    _, s, vh = np.linalg.svd(gen)
    p = vh[-1]
    p = np.abs(p) / np.abs(p).sum()
    scale = max(float(np.max(np.abs(gen))), 1.0)
    if float(np.max(np.abs(gen @ p))) > 1e-10 * scale:
        raise NoiseModelError("stationary distribution residual too large")
    return p


def autocorrelation(noise: JumpNoise, tau) -> np.ndarray | float:
    """Stationary autocovariance ``<X(tau) X(0)> - <X>^2`` (even in tau)."""
    p_s = stationary_distribution(noise)
    mean = float(noise.values @ p_s)
    weighted = noise.values * p_s
    taus = np.atleast_1d(np.asarray(tau, dtype=float))
    out = np.empty(taus.shape)
    for i, t in enumerate(taus):
        prop = expm(noise.generator * abs(t))
        out[i] = float(noise.values @ (prop @ weighted)) - mean**2
    return out if np.ndim(tau) else float(out[0])


def noise_statistics(noise: JumpNoise) -> NoiseStatistics:
    """Stationary mean, variance, and correlation time.

    The correlation time is the slowest relaxation time of the generator,
    ``1 / min(-Re eigenvalue != 0)``; for the telegraph and the
    discretized-Gaussian lattice this equals the autocorrelation decay time
    ``tau_c`` exactly.
    """
    p_s = stationary_distribution(noise)
    mean = float(noise.values @ p_s)
    var = float((noise.values - mean) ** 2 @ p_s)
    ev = np.linalg.eigvals(noise.generator)
    scale = max(float(np.max(np.abs(noise.generator))), 1e-300)
    decaying = ev[np.abs(ev) > 1e-9 * scale]
    corr_time = math.inf if decaying.size == 0 else float(1.0 / np.min(-decaying.real))
    return NoiseStatistics(mean, var, corr_time)


def sample_trajectory(
    noise: JumpNoise, t_max: float, seed: int, index: int = 0
) -> NoiseTrajectory:
    """One Gillespie realization on ``[0, t_max]``.

    Streams are keyed by ``(seed, index)`` with a counter-based generator,
    so trajectory ``index`` is reproducible independently of how many other
    trajectories were drawn.
    """
    if t_max < 0:
        raise NoiseModelError("t_max must be nonnegative")
    if seed < 0 or index < 0:
        raise NoiseModelError("seed and index must be nonnegative")
    rng = np.random.Generator(
        np.random.Philox(key=np.array([seed, index], dtype=np.uint64))
    )
    gen = noise.generator
    if noise.initial_state is None:
        p_s = stationary_distribution(noise)
        state = int(rng.choice(noise.n_states, p=p_s))
    else:
        state = int(noise.initial_state)
    times = [0.0]
    states = [state]
    t = 0.0
    while True:
        exit_rate = -gen[state, state]
        if exit_rate <= 0:
            break
        t += rng.exponential(1.0 / exit_rate)
        if t >= t_max:
            break
        rates = gen[:, state].copy()
        rates[state] = 0.0
        cum = np.cumsum(rates)
        state = int(np.searchsorted(cum, rng.uniform(0.0, cum[-1]), side="right"))
        state = min(state, noise.n_states - 1)
        times.append(t)
        states.append(state)
    return NoiseTrajectory(np.array(times), np.array(states, dtype=np.intp), float(t_max))


def sample_autocorrelation(
    noise: JumpNoise, taus, n_paths: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Monte Carlo stationary autocorrelation ``<X(0)X(tau)> - mean^2``.

    Paths start from the stationary distribution regardless of the model's
    pinned initial state, so the estimate targets the same quantity as
    :func:`autocorrelation`. Returns (estimate, standard error) per lag;
    the lag-0 entry estimates the variance.
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any(taus < 0):
        raise NoiseModelError("lags must be nonnegative")
    if n_paths < 2:
        raise NoiseModelError("need at least two paths for a standard error")
    stationary = replace(noise, initial_state=None)
    mean = noise_statistics(noise).mean
    t_max = float(taus.max())
    products = np.empty((n_paths, taus.size))
    for i in range(n_paths):
        path = sample_trajectory(stationary, t_max, seed, index=i)
        idx = np.searchsorted(path.times, taus, side="right") - 1
        values = noise.values[path.states[np.maximum(idx, 0)]]
        products[i] = values[0] * values
    est = products.mean(axis=0) - mean**2
    se = products.std(axis=0, ddof=1) / np.sqrt(n_paths)
    return est, se
