"""Closed-form diagnostics and fits for noisy-wire simulations.

Everything here is a pure function of Hamiltonians, covariance matrices, or
recorded traces; nothing integrates an equation of motion.  The three
workhorses are

* :func:`heating_rate_analytic`, the golden-rule energy-absorption rate per
  site of a uniformly dephased wire (quadrature over the Brillouin zone),
  against which fitted slopes from :func:`heating_rate_fit` are compared;
* :func:`quench_g_infinity`, the long-time edge correlation after a sudden
  global quench, given by the squared overlaps of the pre- and post-quench
  edge modes (the bulk contribution is exponentially small in the wire
  length and is dropped);
* :func:`dephased_covariance`, the exact infinite-time average of a
  covariance matrix under a fixed Hamiltonian, used to cross-check the
  overlap formula without integrating to large times.

Momenta are measured with the lattice constant set to 1, so the Brillouin
zone is (-pi, pi].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import antisymmetrize, majorana_spectrum
from .errors import FitError, NonTopologicalError
from .wires import (
    MajoranaHamiltonian,
    edge_correlation,
    ground_state_covariance,
    zero_modes,
)

__all__ = [
    "Dispersion",
    "dispersion",
    "heating_rate_analytic",
    "HeatingResult",
    "heating_rate_fit",
    "quench_g_infinity",
    "dephased_covariance",
    "quench_longtime_correlation",
    "slow_noise_decay_model",
]


# ---------------------------------------------------------------------------
# dispersion


@dataclass(frozen=True)
class Dispersion:
    """Quasiparticle band ``E_k`` of the uniform wire on a momentum grid.

    ``gap``/``bandwidth`` are the min/max of ``E_k`` over the grid; the
    physical excitation energy of a pair at ``+-k`` is ``2 E_k``.
    """

    momenta: np.ndarray
    energies: np.ndarray
    gap: float
    bandwidth: float


def _momentum_grid(n_k: int) -> np.ndarray:
    # Midpoints of a uniform partition of (-pi, pi]: never hits k = 0 or pi,
    # so integrands with isolated zeros of E_k stay finite on the grid.
    return -np.pi + (np.arange(n_k) + 0.5) * (2.0 * np.pi / n_k)


def band_energies(k: np.ndarray, hopping: float, pairing: float, mu: float) -> np.ndarray:
    """``E_k = sqrt((2 J cos k + mu)^2 + 4 Delta^2 sin^2 k)``."""
    k = np.asarray(k, dtype=float)
    return np.sqrt((2.0 * hopping * np.cos(k) + mu) ** 2
                   + 4.0 * pairing**2 * np.sin(k) ** 2)


def dispersion(hopping: float, pairing: float, mu: float, n_k: int = 4096) -> Dispersion:
    """Band structure of the uniform wire on ``n_k`` equally spaced momenta.

    The grid spans (-pi, pi] inclusive of the zone edge, so a critical
    wire (|mu| = 2J) reports its gap closing exactly.
    """
    if n_k < 2:
        raise ValueError("need at least two momentum points")
    k = -np.pi + np.arange(1, int(n_k) + 1) * (2.0 * np.pi / int(n_k))
    e = band_energies(k, hopping, pairing, mu)
    return Dispersion(k, e, float(e.min()), float(e.max()))


# ---------------------------------------------------------------------------
# heating rate


def heating_rate_analytic(
    hopping: float,
    pairing: float,
    mu: float,
    sigma: float,
    kappa: float,
    n_k: int = 4096,
) -> float:
    """Energy-absorption rate per site for weak global chemical-potential
    noise of strength ``sigma`` and switching rate ``kappa``.

    Golden rule for pair production at momenta ``+-k``: the matrix element
    of the density perturbation is ``4 Delta^2 sin^2 k / E_k^2``, the pair
    costs ``2 E_k``, and the noise spectral weight at that frequency is
    ``4 kappa sigma^2 / (4 kappa^2 + (2 E_k)^2)``.  Summed over the zone,

        D_s = 4 sigma^2 (1/2pi) int dk  kappa/(kappa^2 + E_k^2)
                                        * Delta^2 sin^2 k / E_k.

    The rate is per site; multiply by the wire length for the extensive
    slope of ``E(t) - E(0)``.  Composite midpoint quadrature on ``n_k``
    points: the integrand is smooth except at a gap closing (|mu| = 2J),
    where it stays integrable and the midpoint grid never samples the
    singular momentum.  Vanishes in both the slow and fast noise limits.
    """
    if sigma == 0.0:
        return 0.0
    if kappa <= 0.0:
        raise ValueError("switching rate kappa must be positive")
    k = _momentum_grid(int(n_k))
    e = band_energies(k, hopping, pairing, mu)
    integrand = kappa / (kappa**2 + e**2) * pairing**2 * np.sin(k) ** 2 / e
    return float(4.0 * sigma**2 * integrand.mean())


@dataclass(frozen=True)
class HeatingResult:
    """Linear fit ``delta_e ~ rate * t`` over ``window = (t_lo, t_hi)``.

    ``residual`` is the RMS deviation from the fit line divided by the
    energy span inside the window (dimensionless; small means the growth
    really is linear there).
    """

    times: np.ndarray
    delta_e: np.ndarray
    rate: float
    window: tuple[float, float]
    residual: float


def heating_rate_fit(
    times,
    delta_e,
    window: tuple[float, float] | None = None,
    max_residual: float = 0.05,
) -> HeatingResult:
    """Least-squares slope of the energy-gain trace in its linear regime.

    The default window starts at t = 2 (past the initial transient) and
    ends before saturation bends the curve: the endpoint is 20% of the
    estimated saturation time, defined as the first time the smoothed
    local slope falls below half of its early value (never triggered when
    heating stays linear throughout).  The intercept is free, absorbing
    the transient offset; a relative RMS residual above ``max_residual``
    means no linear regime exists in the window and raises FitError.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(delta_e, dtype=float)
    if t.ndim != 1 or t.shape != y.shape or t.size < 4:
        raise ValueError("need matching 1D arrays with at least 4 points")
    if window is None:
        t_lo = 2.0
        if t[-1] <= t_lo:
            raise FitError(f"trace ends at t = {t[-1]:g}, before the linear regime")
        window = (t_lo, min(t[-1], 0.2 * _saturation_onset(t, y, t_lo)))
    sel = (t >= window[0]) & (t <= window[1])
    if int(sel.sum()) < 4:
        raise FitError(f"fewer than 4 samples inside fit window {window}")
    tw, yw = t[sel], y[sel]
    (rate, offset), res = np.polyfit(tw, yw, 1), 0.0
    fitted = rate * tw + offset
    span = float(np.ptp(yw)) or 1.0
    res = float(np.sqrt(np.mean((yw - fitted) ** 2))) / span
    if res > max_residual:
        raise FitError(
            f"no linear regime: relative residual {res:.3g} exceeds "
            f"{max_residual:g} in window {window}"
        )
    return HeatingResult(t, y, float(rate), (float(window[0]), float(window[1])), res)


def _saturation_onset(t: np.ndarray, y: np.ndarray, t_lo: float) -> float:
    """First time the local slope drops below half its early value, or a
    value far past the trace end when no bending is detected."""
    slopes = np.gradient(y, t)
    if slopes.size >= 9:  # light smoothing against integrator ripple
        kernel = np.ones(5) / 5.0
        slopes = np.convolve(slopes, kernel, mode="same")
    early = slopes[(t >= t_lo) & (t <= min(2.0 * t_lo, t[-1]))]
    if early.size == 0 or np.max(early) <= 0.0:
        return 10.0 * t[-1]
    bent = (t > 2.0 * t_lo) & (slopes < 0.5 * float(np.max(early)))
    if not bent.any():
        return 10.0 * t[-1]
    return float(t[np.argmax(bent)])


# ---------------------------------------------------------------------------
# quench asymptotics


def quench_g_infinity(
    h_initial: MajoranaHamiltonian,
    h_final: MajoranaHamiltonian,
    zero_tol: float = 1e-6,
) -> float:
    """Long-time edge correlation after a sudden quench ``h_initial ->
    h_final``, from edge-mode overlaps alone.

    Dephasing in the post-quench eigenbasis wipes out every coherence
    except the one stored in the new zero-mode pair, so the correlation of
    the *original* edge modes settles to

        G_inf = (f_L . f_L0)^2 (f_R . f_R0)^2,

    bulk contributions being exponentially small in the wire length.
    Returns 0.0 when ``h_final`` has no zero mode (the stored coherence has
    nowhere to live); raises NonTopologicalError when ``h_initial`` has
    none (there is no initial edge correlation to follow).
    """
    modes0 = zero_modes(h_initial, zero_tol=zero_tol)
    if modes0 is None:
        raise NonTopologicalError(
            "initial Hamiltonian has no zero-energy edge pair"
        )
    modes_f = zero_modes(h_final, zero_tol=zero_tol)
    if modes_f is None:
        return 0.0
    o_left = float(modes_f.f_left @ modes0.f_left)
    o_right = float(modes_f.f_right @ modes0.f_right)
    return o_left**2 * o_right**2


def dephased_covariance(
    h: MajoranaHamiltonian,
    gamma0: np.ndarray,
    cluster_tol: float = 1e-6,
) -> np.ndarray:
    """Infinite-time average of ``gamma0`` evolving under fixed ``h``.

    In the eigenbasis of ``i A`` every matrix element rotates at the
    difference of its two eigenfrequencies; time averaging keeps exactly
    the elements within degenerate clusters (``|omega_i - omega_j| <=
    cluster_tol``).  The tolerance keeps the exponentially split edge pair
    of a topological wire coherent, which is what stores the surviving
    edge correlation.
    """
    omega, v = majorana_spectrum(h.mat)
    g = v.conj().T @ np.asarray(gamma0, dtype=float) @ v
    keep = np.abs(omega[:, None] - omega[None, :]) <= cluster_tol
    avg = (v @ (g * keep) @ v.conj().T).real
    return antisymmetrize(avg)


def quench_longtime_correlation(
    h_initial: MajoranaHamiltonian,
    h_final: MajoranaHamiltonian,
    zero_tol: float = 1e-6,
    cluster_tol: float = 1e-6,
) -> float:
    """Long-time correlation of the initial edge modes after the quench,
    computed exactly from the dephased covariance (no overlap truncation).

    Independent cross-check for :func:`quench_g_infinity`: this keeps all
    bulk terms, so the two agree only up to corrections exponentially
    small in the wire length.
    """
    modes0 = zero_modes(h_initial, zero_tol=zero_tol)
    if modes0 is None:
        raise NonTopologicalError(
            "initial Hamiltonian has no zero-energy edge pair"
        )
    gamma0 = ground_state_covariance(h_initial, zero_tol=zero_tol)
    return edge_correlation(dephased_covariance(h_final, gamma0, cluster_tol), modes0)


# ---------------------------------------------------------------------------
# slow-noise decay law


def slow_noise_decay_model(g_infinity: float, kappa: float):
    """Edge-correlation decay law for slow global telegraph noise.

    Each switch is a sudden quench; after a switch the correlation relaxes
    toward ``g_infinity`` times its pre-switch value, and switches arrive
    at rate ``kappa``, giving ``exp(-kappa (1 - g_infinity) t)``.  With
    zero overlap this is a bare ``exp(-kappa t)``: every switch kills the
    correlation outright.  Returns a vectorized callable of time.
    """
    if not 0.0 <= g_infinity <= 1.0:
        raise ValueError("g_infinity must lie in [0, 1]")
    rate = kappa * (1.0 - g_infinity)

    def model(t):
        return np.exp(-rate * np.asarray(t, dtype=float))

    return model
