"""Floquet maps U = exp(-i tau (J_x H_xx + h_x H_x)) exp(-i tau h_z H_z).

The z kick is the rightmost factor, so it acts first on a ket. ``INVERSE``
applies U^dagger: the conjugate x factor first, then the conjugate z kick.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from floq_otoc import _kernels as K
from floq_otoc.config import ModelConfig
from floq_otoc.errors import ConfigError
from floq_otoc.spinchain import StateVector


class Direction(str, enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


class _PhaseTables:
    """Diagonal factors of one kick, materialized when the chain is small enough."""

    def __init__(self, config: ModelConfig):
        self.config = config
        n = config.n_sites
        self.tabulated = (1 << n) <= K.TABLE_LIMIT
        if self.tabulated:
            scale = 2.0 ** (-n)
            self.z_fwd = K.z_phase_table(n, config.h_z, config.tau, 1.0)
            self.x_fwd = K.x_phase_table(n, config.j_x, config.h_x, config.tau, 1.0, scale)
            self.z_inv = np.conj(self.z_fwd)
            self.x_inv = np.conj(self.x_fwd)

    def forward(self, v: np.ndarray) -> None:
        c = self.config
        if self.tabulated:
            K.multiply(v, self.z_fwd)
            K.fwht(v)
            K.multiply(v, self.x_fwd)
            K.fwht(v)
        else:
            n = c.n_sites
            K.z_phase_fly(v, n, c.h_z, c.tau, 1.0)
            K.fwht(v)
            K.x_phase_fly(v, n, c.j_x, c.h_x, c.tau, 1.0, 2.0 ** (-n))
            K.fwht(v)

    def inverse(self, v: np.ndarray) -> None:
        c = self.config
        if self.tabulated:
            K.fwht(v)
            K.multiply(v, self.x_inv)
            K.fwht(v)
            K.multiply(v, self.z_inv)
        else:
            n = c.n_sites
            K.fwht(v)
            K.x_phase_fly(v, n, c.j_x, c.h_x, c.tau, -1.0, 2.0 ** (-n))
            K.fwht(v)
            K.z_phase_fly(v, n, c.h_z, c.tau, -1.0)


@functools.lru_cache(maxsize=16)
def _tables(config: ModelConfig) -> _PhaseTables:
    return _PhaseTables(config)


@dataclass(frozen=True)
class FloquetMap:
    config: ModelConfig
    direction: Direction = Direction.FORWARD

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))

    def inverse(self) -> FloquetMap:
        other = Direction.INVERSE if self.direction is Direction.FORWARD else Direction.FORWARD
        return FloquetMap(self.config, other)

    def kick_inplace(self, v: np.ndarray, n: int = 1) -> None:
        """Apply ``n`` kicks to a raw amplitude array in place."""
        tables = _tables(self.config)
        step = tables.forward if self.direction is Direction.FORWARD else tables.inverse
        for _ in range(n):
            step(v)


def _check(state: StateVector, fmap: FloquetMap) -> None:
    if state.n_sites != fmap.config.n_sites:
        raise ConfigError(
            f"dimension mismatch: state has {state.n_sites} sites, map has {fmap.config.n_sites}"
        )


def apply_floquet(state: StateVector, fmap: FloquetMap) -> StateVector:
    _check(state, fmap)
    v = state.amplitudes.copy()
    fmap.kick_inplace(v)
    return StateVector(v, state.n_sites)


def evolve_n_kicks(state: StateVector, fmap: FloquetMap, n: int) -> StateVector:
    if n < 0:
        raise ConfigError(f"kick count must be >= 0, got {n}")
    _check(state, fmap)
    v = state.amplitudes.copy()
    fmap.kick_inplace(v, n)
    return StateVector(v, state.n_sites)
