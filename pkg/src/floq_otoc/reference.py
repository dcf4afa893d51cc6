"""Dense-matrix reference implementations (small N only).

Built from explicit Kronecker products and Hermitian eigendecompositions,
sharing nothing with the bit-twiddling kernels. Used as an oracle by the
validation suite and the tests.
"""

from __future__ import annotations

import functools

import numpy as np

from floq_otoc.config import ModelConfig

PAULI = {
    "i": np.eye(2, dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def site_operator(n_sites: int, site: int, axis: str) -> np.ndarray:
    """Pauli on one site; site 0 is the least significant (rightmost) factor."""
    out = np.ones((1, 1), dtype=np.complex128)
    for k in reversed(range(n_sites)):
        out = np.kron(out, PAULI[axis if k == site else "i"])
    return out


@functools.lru_cache(maxsize=8)
def _terms(n_sites: int):
    x = [site_operator(n_sites, k, "x") for k in range(n_sites)]
    z = [site_operator(n_sites, k, "z") for k in range(n_sites)]
    h_xx = sum(x[k] @ x[(k + 1) % n_sites] for k in range(n_sites))
    return h_xx, sum(x), sum(z)


def hamiltonians(n_sites: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(H_xx, H_x, H_z) on the periodic ring."""
    return _terms(n_sites)


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i t h) via eigh."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def floquet_matrix(config: ModelConfig) -> np.ndarray:
    h_xx, h_x, h_z = hamiltonians(config.n_sites)
    u_x = expm_hermitian(config.j_x * h_xx + config.h_x * h_x, config.tau)
    u_z = expm_hermitian(config.h_z * h_z, config.tau)
    return u_x @ u_z


def dense_otoc(config: ModelConfig, axis: str, l: int, m: int, n_max: int, psi: np.ndarray) -> np.ndarray:
    """F(n) = <psi| W(n) V W(n) V |psi> by explicit Heisenberg conjugation."""
    u = floquet_matrix(config)
    w0 = site_operator(config.n_sites, l, axis)
    v = site_operator(config.n_sites, m, axis)
    out = np.empty(n_max + 1, dtype=np.complex128)
    w = w0
    for n in range(n_max + 1):
        out[n] = psi.conj() @ (w @ (v @ (w @ (v @ psi))))
        w = u.conj().T @ w @ u
    return out
