"""Kitaev wire networks in the Majorana representation.

Conventions
-----------
Complex fermions ``a_j`` on sites ``j = 0..N-1`` map to Majorana operators

    c_{2j}   = a_j + a_j^dag,
    c_{2j+1} = -i (a_j - a_j^dag),

so site ``j`` owns the adjacent Majorana pair ``(2j, 2j+1)``. A quadratic
Hamiltonian

    H = sum_bonds [-J a_p^dag a_q + Delta a_p a_q + h.c.] - sum_j mu_j a_j^dag a_j

is stored as the real antisymmetric matrix ``A`` with

    H = (i/4) sum_{kl} A_kl c_k c_l

(the normal-ordering constant is dropped everywhere, consistently). Gaussian
states are encoded by the real antisymmetric covariance matrix

    Gamma_kl = (i/2) < [c_k, c_l] > ,

and closed evolution reads ``dGamma/dt = [A, Gamma]``. Bonds are ordered
pairs: reversing ``(p, q)`` flips the sign of the pairing ``Delta``.

For the ideal chain ``J = Delta`` real, ``mu = 0`` the matrix ``A`` decouples
``c_0`` and ``c_{2N-1}`` exactly; these are the edge Majorana modes, with
ground-state edge correlation ``-i <c_0 c_{2N-1}> = -Gamma[0, 2N-1] = +1``
for the zero-mode filling chosen here. With that filling the ground-state
fermion parity sign(Pf(Gamma)) of the ideal chain is ``(-1)^N``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import (
    antisymmetrize,
    antisymmetry_defect,
    majorana_spectrum,
    max_singular_value,
    pfaffian_sign,
    purity_defect,
)
from .errors import DegenerateGroundStateError, NetworkError

__all__ = [
    "Bond",
    "WireNetwork",
    "MajoranaHamiltonian",
    "EdgeModes",
    "chain",
    "ring",
    "build_hamiltonian",
    "ground_state_covariance",
    "ground_energy",
    "zero_modes",
    "edge_correlation",
    "energy_expectation",
    "trajectory_parity",
    "validate_covariance",
]


@dataclass(frozen=True)
class Bond:
    """Ordered bond p -> q carrying ``-J a_p^dag a_q + Delta a_p a_q + h.c.``"""

    p: int
    q: int
    hopping: float
    pairing: complex


@dataclass(frozen=True, eq=False)
class WireNetwork:
    """A collection of sites and bonds: chains, rings, T-junctions, or
    disjoint wires, depending only on the bond list.

    Parameters
    ----------
    n_sites : int
        Number of complex-fermion sites.
    bonds : tuple of Bond
        At most one bond per unordered site pair.
    mu : ndarray, shape (n_sites,)
        Chemical potential per site (enters as ``-mu_j a_j^dag a_j``).
    labels : tuple of str, optional
        Human-readable site names for diagnostics.
    """

    n_sites: int
    bonds: tuple[Bond, ...]
    mu: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n_sites < 1:
            raise NetworkError("network needs at least one site")
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        if mu.size == 1:
            mu = np.full(self.n_sites, float(mu[0]))
        if mu.shape != (self.n_sites,):
            raise NetworkError(f"mu has shape {mu.shape}, expected ({self.n_sites},)")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "bonds", tuple(self.bonds))
        seen = set()
        for b in self.bonds:
            if not (0 <= b.p < self.n_sites and 0 <= b.q < self.n_sites):
                raise NetworkError(f"bond ({b.p}, {b.q}) references a missing site")
            if b.p == b.q:
                raise NetworkError(f"self-bond on site {b.p}")
            key = frozenset((b.p, b.q))
            if key in seen:
                raise NetworkError(f"duplicate bond between sites {b.p} and {b.q}")
            seen.add(key)
            if not np.isfinite(b.hopping) or not np.isfinite(complex(b.pairing)):
                raise NetworkError(f"non-finite couplings on bond ({b.p}, {b.q})")
        if self.labels is not None and len(self.labels) != self.n_sites:
            raise NetworkError("labels length does not match n_sites")

    def bond_between(self, p: int, q: int) -> Bond:
        for b in self.bonds:
            if {b.p, b.q} == {p, q}:
                return b
        raise NetworkError(f"no bond between sites {p} and {q}")

    def coupling_scale(self) -> float:
        """Largest |J|, |Delta|, |mu| in the network; used for timestep heuristics."""
        scale = float(np.max(np.abs(self.mu))) if self.n_sites else 0.0
        for b in self.bonds:
            scale = max(scale, abs(b.hopping), abs(complex(b.pairing)))
        return scale


def chain(n_sites: int, hopping: float, pairing: complex, mu) -> WireNetwork:
    """Open Kitaev chain with uniform couplings (``mu`` may be per-site)."""
    bonds = tuple(Bond(j, j + 1, hopping, pairing) for j in range(n_sites - 1))
    return WireNetwork(n_sites, bonds, mu)


def ring(n_sites: int, hopping: float, pairing: complex, mu) -> WireNetwork:
    """Periodic chain; the closing bond is oriented (n-1) -> 0."""
    if n_sites < 3:
        raise NetworkError("ring needs at least three sites")
    bonds = tuple(Bond(j, j + 1, hopping, pairing) for j in range(n_sites - 1))
    bonds += (Bond(n_sites - 1, 0, hopping, pairing),)
    return WireNetwork(n_sites, bonds, mu)


@dataclass(frozen=True, eq=False)
class MajoranaHamiltonian:
    """Real antisymmetric single-particle matrix, ``H = (i/4) sum A_kl c_k c_l``.

    The constructor antisymmetrizes exactly, so ``mat == -mat.T`` holds
    bitwise. Site ``j`` owns Majorana rows ``(2j, 2j+1)``.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise NetworkError(f"bad Majorana matrix shape {m.shape}")
        object.__setattr__(self, "mat", antisymmetrize(m))

    @property
    def n_sites(self) -> int:
        return self.mat.shape[0] // 2

    def site_majoranas(self, j: int) -> tuple[int, int]:
        return 2 * j, 2 * j + 1


def build_hamiltonian(network: WireNetwork) -> MajoranaHamiltonian:
    """Assemble the Majorana matrix A of a wire network.

    Per bond p -> q with hopping J and pairing Delta = Dr + i Di the blocks
    are (antisymmetric images implied)

        A[2p,   2q]   += Di        A[2p,   2q+1] += Dr - J
        A[2p+1, 2q]   += Dr + J    A[2p+1, 2q+1] += -Di

    and per site ``A[2j, 2j+1] += -mu_j``.
    """
    n = network.n_sites
    a = np.zeros((2 * n, 2 * n))
    for j in range(n):
        _add(a, 2 * j, 2 * j + 1, -network.mu[j])
    for b in network.bonds:
        dr, di = complex(b.pairing).real, complex(b.pairing).imag
        p, q = 2 * b.p, 2 * b.q
        _add(a, p, q, di)
        _add(a, p, q + 1, dr - b.hopping)
        _add(a, p + 1, q, dr + b.hopping)
        _add(a, p + 1, q + 1, -di)
    return MajoranaHamiltonian(a)


def _add(a: np.ndarray, k: int, l: int, val: float) -> None:
    a[k, l] += val
    a[l, k] -= val


def ground_state_covariance(
    h: MajoranaHamiltonian,
    zero_mode_occupation: int = 0,
    zero_tol: float = 1e-6,
    degenerate_ok: bool = False,
) -> np.ndarray:
    """Covariance matrix of the many-body ground state of ``h``.

    Each eigenvector ``w`` of ``i A`` with eigenvalue ``eps > zero_tol``
    contributes ``2 (Re w Im w^T - Im w Re w^T)``. A doubly degenerate zero
    pair (topological phase) is rotated into edge-localized Majorana vectors
    and filled so the edge correlation ``-f_L^T Gamma f_R`` is ``+1`` for
    ``zero_mode_occupation == 0`` and ``-1`` for ``1``. The tolerance
    matches :func:`zero_modes`, so the pair filled here is the pair measured
    there; for a topological wire the residual splitting below ``zero_tol``
    makes this state stationary only up to O(zero_tol), which is exact for
    every practical wire length (the splitting is exponentially small).

    A null space of dimension > 2 (e.g. ``h == 0``) leaves the ground state
    ill-defined: raises DegenerateGroundStateError unless ``degenerate_ok``,
    in which case the degenerate directions are left unpolarized (Gamma is
    then not pure).
    """
    if zero_mode_occupation not in (0, 1):
        raise ValueError("zero_mode_occupation must be 0 or 1")
    omega, v = majorana_spectrum(h.mat)
    pos = omega > zero_tol
    zero = np.abs(omega) <= zero_tol
    w = v[:, pos]
    x, y = w.real, w.imag
    gamma = 2.0 * (x @ y.T - y @ x.T)
    n_zero = int(zero.sum())
    if n_zero == 2:
        f_a, f_b = _real_null_pair(v[:, zero])
        f_left, f_right = _split_by_position(f_a, f_b, h.n_sites)
        sign = 1.0 if zero_mode_occupation == 0 else -1.0
        gamma += sign * (np.outer(f_right, f_left) - np.outer(f_left, f_right))
    elif n_zero != 0 and not degenerate_ok:
        raise DegenerateGroundStateError(
            f"{n_zero} near-zero modes (|eps| <= {zero_tol}); ground state is "
            "not unique. Pass degenerate_ok=True to leave them unpolarized."
        )
    return antisymmetrize(gamma)


def ground_energy(h: MajoranaHamiltonian) -> float:
    """Ground energy ``-1/2 sum_k eps_k`` (same dropped constant as
    :func:`energy_expectation`)."""
    omega, _ = majorana_spectrum(h.mat)
    return float(-0.5 * omega[omega > 0].sum())


@dataclass(frozen=True, eq=False)
class EdgeModes:
    """Edge-localized Majorana zero-mode pair.

    ``f_left``/``f_right`` are real unit vectors in the Majorana basis,
    localized at the low/high end of the site ordering, with the
    largest-magnitude component positive. ``energy`` is the magnitude of
    the residual splitting shared by the pair; ``localization_length`` is
    measured in lattice constants (0.0 for single-site support).
    """

    f_left: np.ndarray
    f_right: np.ndarray
    energy: float
    localization_length: float


def zero_modes(h: MajoranaHamiltonian, zero_tol: float = 1e-6) -> EdgeModes | None:
    """Edge-mode pair of ``h``, or None if the lowest |eps| exceeds ``zero_tol``
    (non-topological phase)."""
    omega, v = majorana_spectrum(h.mat)
    order = np.argsort(np.abs(omega))
    eps = float(np.abs(omega[order[:2]]).mean())
    if eps > zero_tol:
        return None
    f_a, f_b = _real_null_pair(v[:, order[:2]])
    f_left, f_right = _split_by_position(f_a, f_b, h.n_sites)
    l_left = _localization_length(f_left, h.n_sites, from_right=False)
    l_right = _localization_length(f_right, h.n_sites, from_right=True)
    return EdgeModes(f_left, f_right, eps, 0.5 * (l_left + l_right))


def edge_correlation(gamma: np.ndarray, modes: EdgeModes) -> float:
    """``-i <gamma_L gamma_R> = -f_L^T Gamma f_R`` in the state ``gamma``."""
    if gamma.shape[0] != modes.f_left.size:
        raise ValueError("covariance and mode dimensions differ")
    return float(-modes.f_left @ gamma @ modes.f_right)


def energy_expectation(h: MajoranaHamiltonian, gamma: np.ndarray) -> float:
    """``<H> = (1/4) sum_kl A_kl Gamma_kl`` (normal-ordering constant dropped;
    vanishes for Gamma = 0, equals :func:`ground_energy` in the ground state)."""
    if gamma.shape != h.mat.shape:
        raise ValueError("covariance and Hamiltonian dimensions differ")
    return float(0.25 * np.sum(h.mat * gamma))


def trajectory_parity(gamma: np.ndarray, tol: float = 1e-6) -> int:
    """Fermion parity sign(Pf(Gamma)) of a pure Gaussian state.

    Only defined for pure states: raises ValueError if ``Gamma Gamma^T``
    deviates from the identity by more than ``tol``.
    """
    defect = purity_defect(gamma)
    if defect > tol:
        raise ValueError(
            f"parity undefined for mixed covariance (purity defect {defect:.2e})"
        )
    return pfaffian_sign(gamma)


def validate_covariance(gamma: np.ndarray, pure: bool = False, tol: float = 1e-8) -> dict:
    """Physicality checks; returns the measured defects, raising on violation."""
    report = {
        "antisymmetry_defect": antisymmetry_defect(gamma),
        "max_singular_value": max_singular_value(gamma),
    }
    if report["antisymmetry_defect"] > tol:
        raise ValueError(f"covariance not antisymmetric: {report}")
    if report["max_singular_value"] > 1.0 + 1e-8:
        raise ValueError(f"covariance not a physical state: {report}")
    if pure:
        report["purity_defect"] = purity_defect(gamma)
        if report["purity_defect"] > tol:
            raise ValueError(f"covariance not pure: {report}")
    return report


def _real_null_pair(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Real orthonormal basis of the span of a conjugate pair of eigenvectors."""
    stacked = np.hstack([w.real, w.imag])
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    if s.size < 2 or s[1] < 1e-10:
        raise np.linalg.LinAlgError("zero-mode pair does not span a real plane")
    return u[:, 0], u[:, 1]


def _split_by_position(f_a, f_b, n_sites) -> tuple[np.ndarray, np.ndarray]:
    """Rotate a zero-mode plane into the combinations extremal in site position."""
    position = np.repeat(np.arange(n_sites, dtype=float), 2)
    basis = np.column_stack([f_a, f_b])
    s = basis.T @ (position[:, None] * basis)
    vals, vecs = np.linalg.eigh(0.5 * (s + s.T))
    f_left = basis @ vecs[:, 0]
    f_right = basis @ vecs[:, 1]
    return _fix_sign(f_left), _fix_sign(f_right)


def _fix_sign(f: np.ndarray) -> np.ndarray:
    return -f if f[np.argmax(np.abs(f))] < 0 else f


def _localization_length(f: np.ndarray, n_sites: int, from_right: bool) -> float:
    """Decay length of |f| in lattice constants from a log-envelope fit over
    the near half of the wire.

    The per-site amplitude can oscillate under the exponential envelope
    (complex transfer-matrix roots), so adjacent-site RMS smoothing is
    applied before the fit; sites with amplitude below 1e-12 are excluded.
    """
    amp = np.hypot(f[0::2], f[1::2])
    if from_right:
        amp = amp[::-1]
    half = max(n_sites // 2, 2)
    amp = amp[:half]
    smoothed = np.sqrt(0.5 * (amp[:-1] ** 2 + amp[1:] ** 2))
    d = np.arange(smoothed.size, dtype=float) + 0.5
    keep = smoothed > 1e-12
    if keep.sum() < 2:
        return 0.0
    slope = np.polyfit(d[keep], np.log(smoothed[keep]), 1)[0]
    if slope >= 0.0:
        return float(n_sites)
    return float(-1.0 / slope)
