"""In-place numba kernels on raw amplitude arrays.

All kernels assume the bit convention of :mod:`floq_otoc.spinchain`: bit ``l``
of the index is site ``l``, bit value 0 is the +1 eigenstate of the local
basis (z in the computational basis, x after a Hadamard on every site).
"""

import math

import numba
import numpy as np

# Above this many amplitudes the phase tables are not materialized.
TABLE_LIMIT = 1 << 20


@numba.njit(cache=True)
def popcount(s):
    c = 0
    while s:
        s &= s - 1
        c += 1
    return c


@numba.njit(cache=True)
def ring_bond_sum(s, n_sites):
    """sum_l x_l x_{l+1 mod N} for the +-1 spins encoded by the bits of s."""
    mask = (1 << n_sites) - 1
    rot = ((s >> 1) | (s << (n_sites - 1))) & mask
    return n_sites - 2 * popcount(s ^ rot)


@numba.njit(cache=True)
def magnetization(s, n_sites):
    return n_sites - 2 * popcount(s)


@numba.njit(cache=True)
def _phase(angle):
    # exp(-i angle), spelled out so table and on-the-fly paths agree bitwise
    return complex(math.cos(angle), -math.sin(angle))


@numba.njit(cache=True)
def z_angle(s, n_sites, h_z, tau):
    return tau * h_z * magnetization(s, n_sites)


@numba.njit(cache=True)
def x_angle(s, n_sites, j_x, h_x, tau):
    return tau * (j_x * ring_bond_sum(s, n_sites) + h_x * magnetization(s, n_sites))


@numba.njit(cache=True)
def z_phase_table(n_sites, h_z, tau, sign):
    dim = 1 << n_sites
    out = np.empty(dim, dtype=np.complex128)
    for s in range(dim):
        out[s] = _phase(sign * z_angle(s, n_sites, h_z, tau))
    return out


@numba.njit(cache=True)
def x_phase_table(n_sites, j_x, h_x, tau, sign, scale):
    dim = 1 << n_sites
    out = np.empty(dim, dtype=np.complex128)
    for s in range(dim):
        out[s] = scale * _phase(sign * x_angle(s, n_sites, j_x, h_x, tau))
    return out


@numba.njit(cache=True)
def fwht(v):
    """Unnormalized Walsh-Hadamard butterfly, in place (H^{(x)N} * 2^{N/2})."""
    n = v.shape[0]
    h = 1
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                a = v[j]
                b = v[j + h]
                v[j] = a + b
                v[j + h] = a - b
        h *= 2


@numba.njit(cache=True)
def multiply(v, table):
    for s in range(v.shape[0]):
        v[s] *= table[s]


@numba.njit(cache=True)
def z_phase_fly(v, n_sites, h_z, tau, sign):
    for s in range(v.shape[0]):
        v[s] *= _phase(sign * z_angle(s, n_sites, h_z, tau))


@numba.njit(cache=True)
def x_phase_fly(v, n_sites, j_x, h_x, tau, sign, scale):
    for s in range(v.shape[0]):
        v[s] *= scale * _phase(sign * x_angle(s, n_sites, j_x, h_x, tau))
