"""Independent reference computations for the test suite.

Nothing here touches the state-vector kernels: operators are built with
np.kron, propagators with scipy.linalg.expm.
"""

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SX, "y": SY, "z": SZ}


def op(n, site, axis):
    """Pauli at ``site``; site 0 is bit 0, i.e. the last kron factor."""
    mats = [PAULI[axis] if k == site else I2 for k in range(n)][::-1]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def floquet(n, tau, j_x=1.0, h_x=0.0, h_z=1.0):
    hxx = sum(op(n, k, "x") @ op(n, (k + 1) % n, "x") for k in range(n))
    hx = sum(op(n, k, "x") for k in range(n))
    hz = sum(op(n, k, "z") for k in range(n))
    return expm(-1j * tau * (j_x * hxx + h_x * hx)) @ expm(-1j * tau * h_z * hz)


def all_up(n):
    v = np.zeros(2**n, dtype=complex)
    v[0] = 1
    return v


def all_right(n):
    return np.full(2**n, 2 ** (-n / 2), dtype=complex)


def otoc(u, w, v, psi, n_max):
    """F(n) = <psi| W(n) V W(n) V |psi> with W(n) = U^-n W U^n."""
    out = []
    wn = w
    for _ in range(n_max + 1):
        out.append(psi.conj() @ wn @ v @ wn @ v @ psi)
        wn = u.conj().T @ wn @ u
    return np.array(out)


def commutator_c(u, w, v, psi, n):
    """C(n) = |[W(n), V] psi|^2 / 2, free of the 1 - Re F cancellation."""
    un = np.linalg.matrix_power(u, n)
    wn = un.conj().T @ w @ un
    x = (wn @ v - v @ wn) @ psi
    return 0.5 * float(np.vdot(x, x).real)


def leading_prefactor(n_sites, axis, dl, n, order, taus=(2e-3, 1e-3)):
    """lim_{tau->0} C(n)/tau^order, Richardson-extrapolated to remove the O(tau) term."""
    init = all_up(n_sites) if axis == "z" else all_right(n_sites)
    vals = []
    for tau in taus:
        u = floquet(n_sites, tau, h_x=1.0)
        c = commutator_c(u, op(n_sites, 0, axis), op(n_sites, dl, axis), init, n)
        vals.append(c / tau**order)
    r = taus[0] / taus[1]
    return (r * vals[1] - vals[0]) / (r - 1)
