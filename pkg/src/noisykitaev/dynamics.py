"""Dynamics of Gaussian states driven by classical jump noise.

The joint density over (fermion state, noise state) factorizes into one
unnormalized covariance marginal per noise state m, obeying the closed
hierarchy

    dGamma_m/dt = [A(X_m), Gamma_m] + sum_n L_mn Gamma_n ,

with the physical (noise-averaged) covariance ``Gamma = sum_m Gamma_m`` and
scalar weights ``p_m`` obeying ``dp/dt = L p``. Four backends:

* :func:`evolve_marginal` integrates the hierarchy exactly (fixed-step RK4,
  or a contractive Magnus conjugation when a drive is present).
* :func:`evolve_trajectory_average` samples noise realizations and
  propagates each one exactly segment by segment (Monte Carlo reference).
* :func:`evolve_lindblad_fast` is the fast-noise limit
  ``dGamma/dt = [A_+, Gamma] + sigma^2/(2 kappa) [B, [B, Gamma]]``.
* :func:`evolve_quasi_static` is the frozen-noise average for ``t << tau_c``.

Hamiltonian families enter through :class:`ParameterBinding`,
``A(x) = base + x * pattern``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._linalg import (
    antisymmetry_defect,
    majorana_spectrum,
    max_singular_value,
    purity_defect,
)
from .errors import IntegrationError, NetworkError
from .noise import (
    JumpNoise,
    noise_statistics,
    sample_trajectory,
    stationary_distribution,
)
from .wires import MajoranaHamiltonian, WireNetwork, build_hamiltonian, trajectory_parity

__all__ = [
    "ParameterBinding",
    "bind_global_mu",
    "bind_site_mu",
    "bind_bond_scale",
    "Bilinear",
    "energy_observable",
    "edge_correlation_observable",
    "TimeSeries",
    "MarginalEnsemble",
    "FastLimitSpec",
    "InvariantMonitor",
    "suggest_timestep",
    "evolve_marginal",
    "evolve_lindblad_fast",
    "evolve_quasi_static",
    "evolve_trajectory_average",
]


# ---------------------------------------------------------------------------
# parameter bindings


@dataclass(frozen=True, eq=False)
class ParameterBinding:
    """Affine family of Majorana matrices ``A(x) = base + x * pattern``."""

    base: np.ndarray
    pattern: np.ndarray
    label: str = ""

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float)
        pattern = np.asarray(self.pattern, dtype=float)
        if base.shape != pattern.shape or base.ndim != 2:
            raise NetworkError("binding base and pattern shapes differ")
        object.__setattr__(self, "base", 0.5 * (base - base.T))
        object.__setattr__(self, "pattern", 0.5 * (pattern - pattern.T))

    @property
    def dim(self) -> int:
        return self.base.shape[0]

    def matrix(self, x: float) -> np.ndarray:
        return self.base + x * self.pattern

    def hamiltonian(self, x: float) -> MajoranaHamiltonian:
        return MajoranaHamiltonian(self.matrix(x))

    def state_matrices(self, noise: JumpNoise) -> np.ndarray:
        return np.stack([self.matrix(x) for x in noise.values])


def _site_mu_pattern(n_sites: int, sites) -> np.ndarray:
    pat = np.zeros((2 * n_sites, 2 * n_sites))
    for j in sites:
        pat[2 * j, 2 * j + 1] = -1.0
        pat[2 * j + 1, 2 * j] = 1.0
    return pat


def bind_global_mu(network: WireNetwork) -> ParameterBinding:
    """``mu_j(t) = X(t)`` on every site; the network's own mu is replaced."""
    stripped = WireNetwork(network.n_sites, network.bonds, np.zeros(network.n_sites))
    base = build_hamiltonian(stripped).mat
    return ParameterBinding(base, _site_mu_pattern(network.n_sites, range(network.n_sites)), "global-mu")


def bind_site_mu(network: WireNetwork, site: int) -> ParameterBinding:
    """Additive potential fluctuation ``mu_d -> mu_d + X(t)`` on one site."""
    if not 0 <= site < network.n_sites:
        raise NetworkError(f"site {site} not in network")
    base = build_hamiltonian(network).mat
    return ParameterBinding(base, _site_mu_pattern(network.n_sites, [site]), f"site-mu:{site}")


def bind_bond_scale(network: WireNetwork, p: int, q: int) -> ParameterBinding:
    """Scale factor ``X(t)`` on one bond's hopping and pairing jointly.

    ``X = 1`` is the intact wire, ``X = 0`` cuts the bond. A telegraph
    between those two values realizes repeated splitting and re-joining.
    """
    bond = network.bond_between(p, q)
    if min(bond.p, bond.q) == 0 or max(bond.p, bond.q) == network.n_sites - 1:
        warnings.warn("splitting an edge bond isolates an end site", stacklevel=2)
    others = tuple(b for b in network.bonds if b is not bond)
    base = build_hamiltonian(WireNetwork(network.n_sites, others, network.mu)).mat
    only = np.zeros(network.n_sites)
    pattern = build_hamiltonian(WireNetwork(network.n_sites, (bond,), only)).mat
    return ParameterBinding(base, pattern, f"bond-scale:{bond.p}-{bond.q}")


# ---------------------------------------------------------------------------
# observables


@dataclass(frozen=True, eq=False)
class Bilinear:
    """Observable ``coeff * u^T Gamma v`` (e.g. a Majorana pair correlator).

    Kept as an explicit type so the trajectory sampler can evaluate it
    without reconstructing Gamma.
    """

    u: np.ndarray
    v: np.ndarray
    coeff: float = 1.0

    def __call__(self, gamma: np.ndarray, t: float = 0.0) -> float:
        return self.coeff * float(self.u @ gamma @ self.v)


def edge_correlation_observable(modes) -> Bilinear:
    """``-i <gamma_L gamma_R>`` against a fixed mode pair."""
    return Bilinear(modes.f_left, modes.f_right, -1.0)


def energy_observable(h: MajoranaHamiltonian):
    """``<H>`` against a fixed reference Hamiltonian."""
    mat = h.mat

    def _energy(gamma: np.ndarray, t: float = 0.0) -> float:
        return float(0.25 * np.sum(mat * gamma))

    return _energy


@dataclass(eq=False)
class TimeSeries:
    """Observable traces on a time grid, with optional Monte Carlo standard
    errors and full covariance snapshots."""

    times: np.ndarray
    data: dict[str, np.ndarray]
    errors: dict[str, np.ndarray] = field(default_factory=dict)
    snapshots: dict[float, np.ndarray] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# invariant monitoring


class InvariantMonitor:
    """Collects physicality defects at output times; raise_on_violation
    turns any out-of-tolerance defect into an IntegrationError."""

    def __init__(
        self,
        antisym_tol: float = 1e-8,
        sv_tol: float = 1e-8,
        prob_tol: float = 1e-10,
        purity_tol: float | None = None,
        raise_on_violation: bool = False,
    ):
        self.antisym_tol = antisym_tol
        self.sv_tol = sv_tol
        self.prob_tol = prob_tol
        self.purity_tol = purity_tol
        self.raise_on_violation = raise_on_violation
        self.max_antisym = 0.0
        self.max_sv_excess = 0.0
        self.max_prob_defect = 0.0
        self.max_purity = 0.0
        self.violations: list[str] = []

    def check(self, t: float, gamma: np.ndarray, probs: np.ndarray | None = None) -> None:
        a = antisymmetry_defect(gamma)
        sv = max(max_singular_value(gamma) - 1.0, 0.0)
        self.max_antisym = max(self.max_antisym, a)
        self.max_sv_excess = max(self.max_sv_excess, sv)
        if a > self.antisym_tol:
            self._flag(f"t={t:g}: antisymmetry defect {a:.2e}")
        if sv > self.sv_tol:
            self._flag(f"t={t:g}: singular value exceeds 1 by {sv:.2e}")
        if probs is not None:
            p = abs(float(probs.sum()) - 1.0)
            self.max_prob_defect = max(self.max_prob_defect, p)
            if p > self.prob_tol:
                self._flag(f"t={t:g}: total probability off by {p:.2e}")
        if self.purity_tol is not None:
            pu = purity_defect(gamma)
            self.max_purity = max(self.max_purity, pu)
            if pu > self.purity_tol:
                self._flag(f"t={t:g}: purity defect {pu:.2e}")

    def _flag(self, msg: str) -> None:
        self.violations.append(msg)
        if self.raise_on_violation:
            raise IntegrationError(msg)

    def summary(self) -> dict:
        return {
            "max_antisymmetry_defect": self.max_antisym,
            "max_singular_value_excess": self.max_sv_excess,
            "max_probability_defect": self.max_prob_defect,
            "max_purity_defect": self.max_purity,
            "violations": list(self.violations),
        }


# ---------------------------------------------------------------------------
# shared integration helpers


def suggest_timestep(
    coupling_scale: float,
    max_rate: float = 0.0,
    drive_scale: float = 0.0,
    min_ramp: float = 0.0,
) -> float:
    """Default step: ``min(0.01/J, 0.1/kappa, 0.025/V, 0.05 T_f)``."""
    dt = 0.01 / max(coupling_scale, 1e-12)
    if max_rate > 0:
        dt = min(dt, 0.1 / max_rate)
    if drive_scale > 0:
        # A strong local push rotates its site at frequency ~V. The driven
        # propagator damps such a mode by (dt*w)^6/72 per step, so dt*V must
        # stay ~0.05 for the bias to remain ~1e-8 over the longest protocols.
        dt = min(dt, 0.025 / drive_scale)
    if min_ramp > 0:
        dt = min(dt, 0.05 * min_ramp)
    return dt


def _initial_weights(noise: JumpNoise) -> np.ndarray:
    if noise.initial_state is None:
        return stationary_distribution(noise)
    w = np.zeros(noise.n_states)
    w[noise.initial_state] = 1.0
    return w


def _check_grid(t_grid) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 1 or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    return t


def _snap_indices(t_grid: np.ndarray, snapshot_times) -> dict[int, float]:
    out = {}
    for ts in snapshot_times:
        i = int(np.argmin(np.abs(t_grid - ts)))
        out[i] = float(t_grid[i])
    return out


# ---------------------------------------------------------------------------
# marginal hierarchy


@dataclass(eq=False)
class MarginalEnsemble:
    """Stack of unnormalized covariance marginals, one per noise state."""

    binding: ParameterBinding
    noise: JumpNoise
    gammas: np.ndarray  # (M, 2n, 2n)
    probabilities: np.ndarray  # (M,)

    @classmethod
    def initial(cls, binding: ParameterBinding, noise: JumpNoise, gamma0: np.ndarray):
        """Product initial condition ``Gamma_m(0) = w_m Gamma_0`` with w the
        initial noise distribution."""
        gamma0 = np.asarray(gamma0, dtype=float)
        if gamma0.shape != (binding.dim, binding.dim):
            raise NetworkError("initial covariance does not match the binding")
        w = _initial_weights(noise)
        return cls(binding, noise, w[:, None, None] * gamma0[None], w.copy())

    def covariance(self) -> np.ndarray:
        return self.gammas.sum(axis=0)


def evolve_marginal(
    ensemble: MarginalEnsemble,
    t_grid,
    *,
    drive=None,
    observables: dict | None = None,
    dt: float | None = None,
    snapshot_times=(),
    monitor: InvariantMonitor | None = None,
    convergence_check: bool = False,
    convergence_tol: float = 1e-6,
) -> TimeSeries:
    """Integrate the marginal hierarchy on ``t_grid`` (which must start at
    the ensemble's current time, taken as 0).

    ``drive``, if given, is a callable ``t -> delta A`` added to every noise
    state's matrix (see :mod:`noisykitaev.schedules`). The input ensemble is
    not modified; the final marginals are left in ``series.snapshots`` if
    requested via ``snapshot_times``. With ``convergence_check`` the run is
    repeated at half the step and observables must agree to
    ``convergence_tol``.
    """
    series = _run_marginal(
        ensemble, t_grid, drive, observables, dt, snapshot_times, monitor
    )
    if convergence_check:
        dt_used = dt if dt is not None else _marginal_default_dt(ensemble, drive)
        half = _run_marginal(
            ensemble, t_grid, drive, observables, 0.5 * dt_used, (), None
        )
        for name, vals in series.data.items():
            err = float(np.max(np.abs(vals - half.data[name])))
            if err > convergence_tol:
                raise IntegrationError(
                    f"observable '{name}' changed by {err:.2e} under dt halving"
                )
    return series


def _marginal_default_dt(ensemble: MarginalEnsemble, drive) -> float:
    coupling = 0.5 * float(np.max(np.abs(ensemble.binding.state_matrices(ensemble.noise))))
    rate = float(np.max(-np.diag(ensemble.noise.generator), initial=0.0))
    drive_scale = 0.5 * getattr(drive, "max_abs_delta", 0.0)
    ramp = getattr(drive, "min_ramp_duration", 0.0)
    return suggest_timestep(coupling, rate, drive_scale, ramp)


# Gauss-Legendre nodes 1/2 -+ sqrt(3)/6 and the 4th-order Magnus commutator
# weight sqrt(3)/12.
_GAUSS_OFFSET = math.sqrt(3.0) / 6.0
_MAGNUS_WEIGHT = math.sqrt(3.0) / 12.0


def _truncated_exp4(x: np.ndarray) -> np.ndarray:
    """Degree-4 Taylor polynomial of ``expm``, batched over the leading axis.

    For antisymmetric ``x`` the polynomial ``p`` obeys ``p^T p = 1 - x^6/72 +
    x^8/576``, a contraction whenever ``||x|| < 2 sqrt(2)``, so conjugating a
    covariance by it can never push a singular value above one.
    """
    x2 = x @ x
    out = np.eye(x.shape[-1]) + x + 0.5 * x2
    out += (1.0 / 6.0) * (x2 @ x) + (1.0 / 24.0) * (x2 @ x2)
    return out


def _stochastic_expm(gen: np.ndarray, tau: float) -> np.ndarray:
    """``expm(gen * tau)`` for a jump generator, by uniformisation.

    The series is a convex combination of powers of a stochastic matrix, so
    the result keeps nonnegative entries and unit column sums to roundoff.
    """
    lam = float(np.max(-np.diag(gen), initial=0.0))
    if lam * tau == 0.0:
        return np.eye(gen.shape[0])
    p = np.eye(gen.shape[0]) + gen / lam
    term = np.eye(gen.shape[0])
    out = np.zeros_like(p)
    weight = math.exp(-lam * tau)
    acc = 0.0
    k = 0
    while acc < 1.0 - 1e-16 and k < 500:
        out += weight * term
        acc += weight
        k += 1
        weight *= lam * tau / k
        term = p @ term
    return out / acc


def _run_marginal(ensemble, t_grid, drive, observables, dt, snapshot_times, monitor):
    t_grid = _check_grid(t_grid)
    observables = observables or {}
    if dt is None:
        dt = _marginal_default_dt(ensemble, drive)
    a_states = ensemble.binding.state_matrices(ensemble.noise)
    gen = ensemble.noise.generator
    gammas = ensemble.gammas.copy()
    probs = ensemble.probabilities.copy()

    def rhs(t, g, p):
        k = a_states @ g
        dg = k - k.transpose(0, 2, 1)
        dg += np.tensordot(gen, g, axes=(1, 0))
        return dg, gen @ p

    # Undriven mixed marginals use plain RK4; its one-step map truncates the
    # exponential of the full generator at degree 4, accurate to O(dt^4) but
    # not a conjugation, so singular values creep O(dt^4) above one on long
    # horizons. Single-state or driven runs instead conjugate by the
    # truncated exponential of the (Magnus) generator, a strict contraction
    # for ||dt A|| < 2 sqrt(2), with any jump mixing Strang-split around it;
    # there purity can only drift down, and only at O(dt^6) per step.
    mixing = bool(np.any(gen))
    mix_cache: dict[float, np.ndarray] = {}

    def step_rk4(t, h, gammas, probs):
        k1g, k1p = rhs(t, gammas, probs)
        k2g, k2p = rhs(t + 0.5 * h, gammas + 0.5 * h * k1g, probs + 0.5 * h * k1p)
        k3g, k3p = rhs(t + 0.5 * h, gammas + 0.5 * h * k2g, probs + 0.5 * h * k2p)
        k4g, k4p = rhs(t + h, gammas + h * k3g, probs + h * k3p)
        gammas = gammas + (h / 6.0) * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
        probs = probs + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        return gammas, probs

    def step_magnus(t, h, gammas, probs):
        if drive is None:
            omega = h * a_states
        else:
            a1 = a_states + drive(t + (0.5 - _GAUSS_OFFSET) * h)[None]
            a2 = a_states + drive(t + (0.5 + _GAUSS_OFFSET) * h)[None]
            omega = (0.5 * h) * (a1 + a2)
            omega += (_MAGNUS_WEIGHT * h * h) * (a2 @ a1 - a1 @ a2)
        r = _truncated_exp4(omega)
        if mixing:
            m = mix_cache.get(h)
            if m is None:
                m = mix_cache.setdefault(h, _stochastic_expm(gen, 0.5 * h))
            gammas = np.tensordot(m, gammas, axes=(1, 0))
            gammas = r @ gammas @ r.transpose(0, 2, 1)
            gammas = np.tensordot(m, gammas, axes=(1, 0))
            probs = m @ (m @ probs)
        else:
            gammas = r @ gammas @ r.transpose(0, 2, 1)
        return gammas, probs

    step = step_rk4 if (drive is None and mixing) else step_magnus
    snap_at = _snap_indices(t_grid, snapshot_times)
    series = TimeSeries(t_grid, {k: np.empty(t_grid.size) for k in observables})
    t = float(t_grid[0])
    for i, t_target in enumerate(t_grid):
        if i > 0:
            span = t_target - t
            nsub = max(1, math.ceil(span / dt - 1e-12))
            h = span / nsub
            for _ in range(nsub):
                gammas, probs = step(t, h, gammas, probs)
                gammas = 0.5 * (gammas - gammas.transpose(0, 2, 1))
                t += h
            t = t_target
        total = gammas.sum(axis=0)
        for name, obs in observables.items():
            series.data[name][i] = obs(total, t_target)
        if i in snap_at:
            series.snapshots[snap_at[i]] = total.copy()
        if monitor is not None:
            monitor.check(t_target, total, probs)
    return series


# ---------------------------------------------------------------------------
# fast-noise (Lindblad) limit


@dataclass(frozen=True, eq=False)
class FastLimitSpec:
    """Averaged Hamiltonian plus white-noise dissipator strength.

    ``dGamma/dt = [a_mean, Gamma] + damping [coupling, [coupling, Gamma]]``
    with ``damping = sigma^2 tau_c = sigma^2 / (2 kappa)``.
    """

    a_mean: np.ndarray
    coupling: np.ndarray
    damping: float

    def __post_init__(self):
        if self.damping < 0:
            raise ValueError("damping must be nonnegative")

    @classmethod
    def from_binding(cls, binding: ParameterBinding, noise: JumpNoise) -> "FastLimitSpec":
        stats = noise_statistics(noise)
        damping = stats.variance * stats.corr_time if stats.variance > 0 else 0.0
        return cls(binding.matrix(stats.mean), binding.pattern, damping)


def evolve_lindblad_fast(
    spec: FastLimitSpec,
    gamma0: np.ndarray,
    t_grid,
    *,
    observables: dict | None = None,
    dt: float | None = None,
    snapshot_times=(),
    monitor: InvariantMonitor | None = None,
) -> TimeSeries:
    """Integrate the fast-noise master equation (fixed-step RK4)."""
    t_grid = _check_grid(t_grid)
    observables = observables or {}
    a, b, c = spec.a_mean, spec.coupling, spec.damping
    if dt is None:
        scale = 0.5 * float(np.max(np.abs(a))) + c * max(1.0, float(np.max(np.abs(b)))) ** 2
        dt = suggest_timestep(max(scale, 1e-12))
    gamma = np.asarray(gamma0, dtype=float).copy()

    def rhs(g):
        k = a @ g
        dg = k - k.T
        m1 = b @ g
        k1 = m1 - m1.T
        m2 = b @ k1
        dg += c * (m2 - m2.T)
        return dg

    snap_at = _snap_indices(t_grid, snapshot_times)
    series = TimeSeries(t_grid, {k: np.empty(t_grid.size) for k in observables})
    t = float(t_grid[0])
    for i, t_target in enumerate(t_grid):
        if i > 0:
            span = t_target - t
            nsub = max(1, math.ceil(span / dt - 1e-12))
            h = span / nsub
            for _ in range(nsub):
                k1 = rhs(gamma)
                k2 = rhs(gamma + 0.5 * h * k1)
                k3 = rhs(gamma + 0.5 * h * k2)
                k4 = rhs(gamma + h * k3)
                gamma += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                gamma = 0.5 * (gamma - gamma.T)
            t = t_target
        for name, obs in observables.items():
            series.data[name][i] = obs(gamma, t_target)
        if i in snap_at:
            series.snapshots[snap_at[i]] = gamma.copy()
        if monitor is not None:
            monitor.check(t_target, gamma)
    return series


# ---------------------------------------------------------------------------
# quasi-static (slow-noise) limit


def evolve_quasi_static(
    binding: ParameterBinding,
    noise: JumpNoise,
    gamma0: np.ndarray,
    t_grid,
    *,
    observables: dict | None = None,
    snapshot_times=(),
    monitor: InvariantMonitor | None = None,
) -> TimeSeries:
    """Average of frozen-noise evolutions, valid for ``t << tau_c``.

    Weights follow the initial noise distribution. Warns when the grid
    extends beyond ``0.2 tau_c``.
    """
    t_grid = _check_grid(t_grid)
    observables = observables or {}
    stats = noise_statistics(noise)
    if math.isfinite(stats.corr_time) and t_grid[-1] > 0.2 * stats.corr_time:
        warnings.warn(
            f"quasi-static average used up to t={t_grid[-1]:g} with tau_c={stats.corr_time:g}",
            stacklevel=2,
        )
    w = _initial_weights(noise)
    gamma0 = np.asarray(gamma0, dtype=float)
    spectra = [
        majorana_spectrum(binding.matrix(x)) if w[m] > 0 else None
        for m, x in enumerate(noise.values)
    ]
    snap_at = _snap_indices(t_grid, snapshot_times)
    series = TimeSeries(t_grid, {k: np.empty(t_grid.size) for k in observables})
    for i, t in enumerate(t_grid):
        total = np.zeros_like(gamma0)
        for m, sp in enumerate(spectra):
            if sp is None:
                continue
            omega, v = sp
            u = (v * np.exp(-1j * omega * t)) @ v.conj().T
            u = u.real
            total += w[m] * (u @ gamma0 @ u.T)
        for name, obs in observables.items():
            series.data[name][i] = obs(total, t)
        if i in snap_at:
            series.snapshots[snap_at[i]] = total.copy()
        if monitor is not None:
            monitor.check(t, total)
    return series


# ---------------------------------------------------------------------------
# trajectory Monte Carlo


def evolve_trajectory_average(
    binding: ParameterBinding,
    noise: JumpNoise,
    gamma0: np.ndarray,
    t_grid,
    *,
    n_trajectories: int,
    seed: int,
    observables: dict,
    snapshot_times=(),
    check_parity: bool = False,
    parity_tol: float = 1e-6,
) -> TimeSeries:
    """Monte Carlo average over noise realizations with exact per-segment
    propagation.

    Each trajectory is evolved in the eigenbasis of its current noise state
    (diagonal phase rotations between switches, one precomputed basis change
    per switch), which is algebraically identical to matrix-exponential
    propagation. Bilinear observables are contracted without reconstructing
    Gamma. Standard errors of the mean are returned per grid time.

    ``check_parity`` verifies that sign(Pf(Gamma)) is constant along every
    trajectory (pure unitary evolution preserves parity); this reconstructs
    Gamma at every grid time and is meant for small systems.
    """
    t_grid = _check_grid(t_grid)
    if float(t_grid[0]) != 0.0:
        raise ValueError("trajectory averaging requires t_grid starting at 0")
    if n_trajectories < 1:
        raise ValueError("n_trajectories must be >= 1")
    gamma0 = np.asarray(gamma0, dtype=float)
    m_states = noise.n_states
    spectra = [majorana_spectrum(binding.matrix(x)) for x in noise.values]
    gamma0_rot = [v.conj().T @ gamma0 @ v for _, v in spectra]
    switch_mats: dict[tuple[int, int], np.ndarray] = {}

    def basis_change(old: int, new: int) -> np.ndarray:
        key = (old, new)
        if key not in switch_mats:
            switch_mats[key] = spectra[new][1].conj().T @ spectra[old][1]
        return switch_mats[key]

    names = list(observables)
    bilinears = {
        name: obs for name, obs in observables.items() if isinstance(obs, Bilinear)
    }
    generic = {name: obs for name, obs in observables.items() if name not in bilinears}
    need_gamma = bool(generic) or check_parity or bool(snapshot_times)
    uv_rot = {
        name: [
            (spectra[m][1].conj().T @ obs.u, spectra[m][1].conj().T @ obs.v)
            for m in range(m_states)
        ]
        for name, obs in bilinears.items()
    }

    n_t = t_grid.size
    acc = {name: np.zeros(n_t) for name in names}
    acc_sq = {name: np.zeros(n_t) for name in names}
    snap_at = _snap_indices(t_grid, snapshot_times)
    snap_acc = {tv: np.zeros_like(gamma0) for tv in snap_at.values()}
    ref_parity: list[int] = []

    for traj_idx in range(n_trajectories):
        path = sample_trajectory(noise, float(t_grid[-1]), seed, traj_idx)
        state = int(path.states[0])
        g_rot = gamma0_rot[state].copy()
        t_cur = 0.0
        next_switch = 1
        row = {name: np.empty(n_t) for name in names}
        parity0: int | None = None
        for i, t_target in enumerate(t_grid):
            while next_switch < path.times.size and path.times[next_switch] <= t_target:
                ts = float(path.times[next_switch])
                g_rot = _rotate(g_rot, spectra[state][0], ts - t_cur)
                t_cur = ts
                new_state = int(path.states[next_switch])
                w = basis_change(state, new_state)
                g_rot = w @ g_rot @ w.conj().T
                state = new_state
                next_switch += 1
            if t_target > t_cur:
                g_rot = _rotate(g_rot, spectra[state][0], t_target - t_cur)
                t_cur = float(t_target)
            for name, obs in bilinears.items():
                u, v = uv_rot[name][state]
                row[name][i] = obs.coeff * float(np.vdot(u, g_rot @ v).real)
            if need_gamma:
                vb = spectra[state][1]
                gamma_t = (vb @ g_rot @ vb.conj().T).real
                gamma_t = 0.5 * (gamma_t - gamma_t.T)
                for name, obs in generic.items():
                    row[name][i] = obs(gamma_t, t_target)
                if i in snap_at:
                    snap_acc[snap_at[i]] += gamma_t
                if check_parity:
                    par = trajectory_parity(gamma_t, parity_tol)
                    if parity0 is None:
                        parity0 = par
                    elif par != parity0:
                        raise IntegrationError(
                            f"parity flipped along trajectory {traj_idx} at t={t_target:g}"
                        )
        if check_parity and parity0 is not None:
            ref_parity.append(parity0)
        for name in names:
            acc[name] += row[name]
            acc_sq[name] += row[name] ** 2

    if check_parity and len(set(ref_parity)) > 1:
        raise IntegrationError("initial parity differs across trajectories")

    n = float(n_trajectories)
    series = TimeSeries(t_grid, {}, errors={})
    for name in names:
        mean = acc[name] / n
        series.data[name] = mean
        if n_trajectories > 1:
            var = np.maximum(acc_sq[name] / n - mean**2, 0.0) * (n / (n - 1.0))
            series.errors[name] = np.sqrt(var / n)
        else:
            series.errors[name] = np.zeros(n_t)
    for tv, g in snap_acc.items():
        series.snapshots[tv] = g / n
    return series


def _rotate(g_rot: np.ndarray, omega: np.ndarray, tau: float) -> np.ndarray:
    """Advance a covariance in the eigenbasis of its frozen Hamiltonian:
    ``G_ij -> exp(-i w_i tau) G_ij exp(+i w_j tau)``."""
    ph = np.exp(-1j * omega * tau)
    return (ph[:, None] * g_rot) * ph.conj()[None, :]
