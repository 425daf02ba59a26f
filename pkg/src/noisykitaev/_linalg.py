"""Dense linear-algebra helpers for real antisymmetric matrices.

Everything here works on plain ndarrays; physical conventions live in
:mod:`noisykitaev.wires`.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import schur


def antisymmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m - m.T)


def antisymmetry_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m + m.T))) if m.size else 0.0


def majorana_spectrum(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition i*a = v @ diag(omega) @ v^dag for real antisymmetric a.

    Eigenvalues come in +/- pairs and are returned ascending (eigh order).
    """
    omega, v = np.linalg.eigh(1j * np.asarray(a, dtype=float))
    return omega, v


def propagator(omega: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
    """Orthogonal matrix exp(a t) from the spectrum of i*a.

    exp(a t) = exp(-i (i a) t) = v exp(-i omega t) v^dag, real up to roundoff.
    """
    u = (v * np.exp(-1j * omega * t)) @ v.conj().T
    return np.ascontiguousarray(u.real)


def purity_defect(gamma: np.ndarray) -> float:
    """max|Gamma Gamma^T - 1|; zero iff Gamma encodes a pure Gaussian state."""
    n = gamma.shape[0]
    return float(np.max(np.abs(gamma @ gamma.T - np.eye(n))))


def max_singular_value(gamma: np.ndarray) -> float:
    return float(np.linalg.norm(gamma, 2))


def pfaffian_sign(a: np.ndarray, tol: float = 1e-8) -> int:
    """Sign of the Pfaffian of a real antisymmetric matrix.

    Uses the real Schur form a = Q T Q^T: T is block diagonal with 2x2
    antisymmetric blocks [[0, b], [-b, 0]] (up to roundoff), and
    Pf(a) = det(Q) * prod(b over blocks). Only the sign is returned;
    returns 0 if a is (numerically) singular or odd-dimensional.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n % 2:
        return 0
    if n == 0:
        return 1
    t, z = schur(a, output="real")
    scale = max(float(np.max(np.abs(t))), tol)
    sign = 1.0
    i = 0
    while i < n:
        if i + 1 < n and abs(t[i, i + 1]) > tol * scale:
            sign *= np.sign(t[i, i + 1])
            i += 2
        else:
            return 0
    if np.linalg.det(z) < 0:
        sign = -sign
    return int(sign)
