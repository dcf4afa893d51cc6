"""State vectors on a periodic spin ring and the primitive kernels acting on them.

Basis convention: amplitude index ``s`` is a bitstring with site 0 as the least
significant bit; bit 0 means spin up (sigma_z = +1), bit 1 means spin down.
Every function returns a new :class:`StateVector`; inputs are never mutated.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from floq_otoc import _kernels as K
from floq_otoc.config import check_n_sites
from floq_otoc.errors import ConfigError


class Axis(str, enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"


@dataclass(frozen=True)
class SiteObservable:
    site: int
    axis: Axis

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    n_sites: int

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_sites,):
            raise ConfigError(
                f"expected {1 << self.n_sites} amplitudes for {self.n_sites} sites, got {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.sqrt(inner_product(self, self).real))

    def copy(self) -> StateVector:
        return StateVector(self.amplitudes.copy(), self.n_sites)

    def __len__(self):
        return self.amplitudes.shape[0]


class InitialKind(str, enum.Enum):
    ALL_UP_Z = "all_up"
    ALL_RIGHT_X = "all_right"
    HAAR_RANDOM = "haar"


@dataclass(frozen=True)
class InitialState:
    """Recipe for an initial state; ``seed`` is only used by ``HAAR_RANDOM``."""

    kind: InitialKind
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", InitialKind(self.kind))
        if self.kind is InitialKind.HAAR_RANDOM and self.seed is None:
            raise ConfigError("HaarRandom initial state needs a seed")

    @classmethod
    def all_up(cls):
        return cls(InitialKind.ALL_UP_Z)

    @classmethod
    def all_right(cls):
        return cls(InitialKind.ALL_RIGHT_X)

    @classmethod
    def haar(cls, seed: int):
        return cls(InitialKind.HAAR_RANDOM, int(seed))

    def label(self) -> str:
        if self.kind is InitialKind.HAAR_RANDOM:
            return f"haar:{self.seed}"
        return self.kind.value


def build_initial_state(kind: InitialState | InitialKind | str, n_sites: int) -> StateVector:
    """|up...up>, |right...right> or a seeded Haar-random state.

    Haar sampling draws i.i.d. standard complex Gaussians and normalizes,
    which is exactly the uniform measure on the unit sphere of C^(2^N).
    """
    if not isinstance(kind, InitialState):
        kind = InitialState(InitialKind(kind))
    check_n_sites(n_sites)
    dim = 1 << n_sites
    if kind.kind is InitialKind.ALL_UP_Z:
        amps = np.zeros(dim, dtype=np.complex128)
        amps[0] = 1.0
    elif kind.kind is InitialKind.ALL_RIGHT_X:
        amps = np.full(dim, 2.0 ** (-n_sites / 2), dtype=np.complex128)
    else:
        rng = np.random.default_rng(np.uint64(kind.seed & 0xFFFFFFFFFFFFFFFF))
        raw = rng.standard_normal((2, dim))
        amps = raw[0] + 1j * raw[1]
        amps /= np.sqrt(np.sum(np.abs(amps) ** 2))
    return StateVector(amps, n_sites)


def _check_site(site: int, n_sites: int) -> None:
    if not 0 <= site < n_sites:
        raise ConfigError(f"site {site} out of range for {n_sites} sites")


def pauli_inplace(v: np.ndarray, site: int, axis: Axis) -> np.ndarray:
    """Apply a single-site Pauli to a raw amplitude array; returns the result array.

    Z is applied in place; X and Y need a gather and return a new array.
    """
    mask = 1 << site
    if axis is Axis.Z:
        idx = np.arange(v.shape[0])
        v[(idx & mask) != 0] *= -1.0
        return v
    flipped = v[np.arange(v.shape[0]) ^ mask]
    if axis is Axis.Y:
        down = (np.arange(v.shape[0]) & mask) != 0
        flipped[down] *= 1j
        flipped[~down] *= -1j
    return flipped


def apply_pauli(state: StateVector, obs: SiteObservable) -> StateVector:
    _check_site(obs.site, state.n_sites)
    out = pauli_inplace(state.amplitudes.copy(), obs.site, obs.axis)
    return StateVector(out, state.n_sites)


def hadamard_all(state: StateVector) -> StateVector:
    """Per-site Hadamard on every site (maps the z basis onto the x basis)."""
    v = state.amplitudes.copy()
    K.fwht(v)
    v *= 2.0 ** (-state.n_sites / 2)
    return StateVector(v, state.n_sites)


def z_kick_inplace(v: np.ndarray, n_sites: int, h_z: float, tau: float, sign: float = 1.0) -> None:
    K.z_phase_fly(v, n_sites, h_z, tau, sign)


def x_kick_inplace(
    v: np.ndarray, n_sites: int, j_x: float, h_x: float, tau: float, sign: float = 1.0
) -> None:
    # the two unnormalized butterflies contribute 2^N; fold it into the phase
    K.fwht(v)
    K.x_phase_fly(v, n_sites, j_x, h_x, tau, sign, 2.0 ** (-n_sites))
    K.fwht(v)


def apply_diagonal_z_kick(state: StateVector, h_z: float, tau: float) -> StateVector:
    """Multiply amplitude s by exp(-i tau h_z m_z(s)), m_z = N - 2 popcount(s)."""
    v = state.amplitudes.copy()
    z_kick_inplace(v, state.n_sites, h_z, tau)
    return StateVector(v, state.n_sites)


def apply_x_basis_kick(state: StateVector, j_x: float, h_x: float, tau: float) -> StateVector:
    """exp(-i tau (J_x sum_l s^x_l s^x_{l+1} + h_x sum_l s^x_l)) on the periodic ring."""
    v = state.amplitudes.copy()
    x_kick_inplace(v, state.n_sites, j_x, h_x, tau)
    return StateVector(v, state.n_sites)


def vdot(a: np.ndarray, b: np.ndarray) -> complex:
    # np.add.reduce on a contiguous array is a pairwise (blocked tree) sum,
    # so the result does not depend on how the product was produced.
    return complex(np.sum(np.conj(a) * b))


def inner_product(a: StateVector, b: StateVector) -> complex:
    if a.n_sites != b.n_sites:
        raise ConfigError(f"dimension mismatch: {a.n_sites} vs {b.n_sites} sites")
    return vdot(a.amplitudes, b.amplitudes)
