"""Shared fixtures and exact-diagonalization helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from noisykitaev.wires import WireNetwork


def jordan_wigner_ops(n_sites: int) -> list[np.ndarray]:
    """Dense annihilation operators a_j on the 2^N Fock space."""
    eye = np.eye(2)
    z = np.diag([1.0, -1.0])
    # |0> = (1, 0): a = |0><1| lowers occupation
    low = np.array([[0.0, 1.0], [0.0, 0.0]])
    ops = []
    for j in range(n_sites):
        factors = [z] * j + [low] + [eye] * (n_sites - j - 1)
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    return ops


def majorana_ops(n_sites: int) -> list[np.ndarray]:
    """Dense Majorana operators c_{2j} = a_j + a_j^dag, c_{2j+1} = -i(a_j - a_j^dag)."""
    out = []
    for a in jordan_wigner_ops(n_sites):
        out.append(a + a.conj().T)
        out.append(-1j * (a - a.conj().T))
    return out


def dense_hamiltonian(network: WireNetwork) -> np.ndarray:
    """Exact many-body Hamiltonian of a wire network on the Fock space."""
    a = jordan_wigner_ops(network.n_sites)
    dim = 2**network.n_sites
    h = np.zeros((dim, dim), dtype=complex)
    for j in range(network.n_sites):
        h -= network.mu[j] * a[j].conj().T @ a[j]
    for b in network.bonds:
        term = -b.hopping * a[b.p].conj().T @ a[b.q] + b.pairing * a[b.p] @ a[b.q]
        h += term + term.conj().T
    return h


def dense_majorana_form(mat: np.ndarray) -> np.ndarray:
    """(i/4) sum_kl A_kl c_k c_l as a dense Fock-space operator."""
    n_sites = mat.shape[0] // 2
    c = majorana_ops(n_sites)
    dim = 2**n_sites
    h = np.zeros((dim, dim), dtype=complex)
    rows, cols = np.nonzero(mat)
    for k, l in zip(rows, cols):
        h += 0.25j * mat[k, l] * c[k] @ c[l]
    return h


def dense_covariance(psi: np.ndarray, n_sites: int) -> np.ndarray:
    """Gamma_kl = (i/2) <psi| [c_k, c_l] |psi> from an exact state vector."""
    c = majorana_ops(n_sites)
    dim = 2 * n_sites
    gamma = np.zeros((dim, dim))
    for k in range(dim):
        for l in range(k + 1, dim):
            val = 1j * (psi.conj() @ (c[k] @ (c[l] @ psi)))
            gamma[k, l] = val.real
            gamma[l, k] = -val.real
    return gamma


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
