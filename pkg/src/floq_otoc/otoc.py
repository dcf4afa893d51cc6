"""Out-of-time-order correlators by state-vector echo.

For Pauli observables W (site l) and V (site m),

    F(n) = <init| W(n) V W(n) V |init>,   W(n) = U^-n W U^n,

is evaluated as the overlap <A_n|B_n> with

    A_n = W U^n |init>,
    B_n = U^n V U^-n W U^n V |init>.

U^n |init> and U^n V |init> are carried along incrementally; the echo
(n inverse kicks, V, n forward kicks) is redone for every evaluated n, so a
series costs Theta(n_max^2 / stride) kicks and never stores an operator.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from floq_otoc.config import ModelConfig
from floq_otoc.errors import ConfigError
from floq_otoc.floquet import Direction, FloquetMap
from floq_otoc.spinchain import (
    Axis,
    InitialKind,
    InitialState,
    build_initial_state,
    vdot,
)


class OtocAxis(str, enum.Enum):
    TM = "tm"  # sigma_z observables, transverse to the Ising axis
    LM = "lm"  # sigma_x observables, along the Ising axis

    @property
    def pauli(self) -> Axis:
        return Axis.Z if self is OtocAxis.TM else Axis.X

    def default_initial(self) -> InitialState:
        return InitialState.all_up() if self is OtocAxis.TM else InitialState.all_right()


@dataclass(frozen=True)
class OtocRequest:
    config: ModelConfig
    axis: OtocAxis
    l: int
    m: int
    n_max: int
    stride: int = 1
    initial: InitialState | None = None
    # kicks 0..dense_until are all evaluated regardless of stride
    dense_until: int = 0

    def __post_init__(self):
        object.__setattr__(self, "axis", OtocAxis(self.axis))
        if self.initial is None:
            object.__setattr__(self, "initial", self.axis.default_initial())
        n = self.config.n_sites
        for name in ("l", "m"):
            site = getattr(self, name)
            if not 0 <= site < n:
                raise ConfigError(f"{name}={site} out of range for {n} sites")
        if self.l == self.m:
            raise ConfigError("observables must sit on distinct sites (l != m)")
        if self.n_max < 0:
            raise ConfigError(f"n_max must be >= 0, got {self.n_max}")
        if self.stride < 1:
            raise ConfigError(f"stride must be >= 1, got {self.stride}")
        if self.dense_until < 0:
            raise ConfigError(f"dense_until must be >= 0, got {self.dense_until}")

    @property
    def separation(self) -> int:
        """Raw |l - m|, used for labels."""
        return abs(self.l - self.m)

    @property
    def ring_distance(self) -> int:
        d = self.separation
        return min(d, self.config.n_sites - d)

    def kicks(self) -> np.ndarray:
        dense = np.arange(0, min(self.dense_until, self.n_max) + 1)
        strided = np.arange(0, self.n_max + 1, self.stride)
        return np.union1d(dense, strided).astype(np.int64)

    def with_(self, **changes) -> OtocRequest:
        fields = dict(
            config=self.config,
            axis=self.axis,
            l=self.l,
            m=self.m,
            n_max=self.n_max,
            stride=self.stride,
            initial=self.initial,
            dense_until=self.dense_until,
        )
        fields.update(changes)
        return OtocRequest(**fields)


@dataclass(frozen=True, eq=False)
class OtocSeries:
    request: OtocRequest
    kicks: np.ndarray
    f_values: np.ndarray
    c_values: np.ndarray = field(default=None)
    truncated: bool = False

    def __post_init__(self):
        kicks = np.asarray(self.kicks, dtype=np.int64)
        f = np.asarray(self.f_values, dtype=np.complex128)
        c = 1.0 - f.real if self.c_values is None else np.asarray(self.c_values, dtype=np.float64)
        if not (kicks.shape == f.shape == c.shape):
            raise ValueError("kicks, f_values and c_values must have equal length")
        for arr in (kicks, f, c):
            arr.setflags(write=False)
        object.__setattr__(self, "kicks", kicks)
        object.__setattr__(self, "f_values", f)
        object.__setattr__(self, "c_values", c)

    def __len__(self):
        return self.kicks.shape[0]

    @property
    def re_f(self) -> np.ndarray:
        return self.f_values.real

    def is_dense(self) -> bool:
        """True when kicks are exactly 0, 1, 2, ..."""
        return bool(np.array_equal(self.kicks, np.arange(len(self.kicks))))


class _Pauli:
    """Single-site Pauli with its sign mask / gather index precomputed."""

    def __init__(self, n_sites: int, site: int, axis: Axis):
        idx = np.arange(1 << n_sites)
        self.axis = axis
        down = (idx >> site) & 1
        if axis is Axis.Z:
            self.factor = (1.0 - 2.0 * down).astype(np.float64)
        else:
            self.gather = idx ^ (1 << site)
            if axis is Axis.Y:
                self.factor = np.where(down == 1, 1j, -1j)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        """Return P v; Z acts in place on ``v``."""
        if self.axis is Axis.Z:
            v *= self.factor
            return v
        out = v[self.gather]
        if self.axis is Axis.Y:
            out *= self.factor
        return out


def _observables(request: OtocRequest) -> tuple[_Pauli, _Pauli]:
    n = request.config.n_sites
    axis = request.axis.pauli
    return _Pauli(n, request.l, axis), _Pauli(n, request.m, axis)


def _echo(fwd: FloquetMap, inv: FloquetMap, w: _Pauli, v: _Pauli, psi, vpsi, n: int) -> complex:
    a = w(psi.copy())
    b = w(vpsi.copy())
    inv.kick_inplace(b, n)
    b = v(b)
    fwd.kick_inplace(b, n)
    return vdot(a, b)


def compute_otoc_series(request: OtocRequest, budget_s: float | None = None) -> OtocSeries:
    """F(n) and C(n) = 1 - Re F(n) at every kick of ``request.kicks()``.

    F(0) is set to 1 exactly: distinct-site Paulis commute. If ``budget_s``
    wall-clock seconds elapse, the series evaluated so far is returned with
    ``truncated=True``.
    """
    start = time.perf_counter()
    fwd = FloquetMap(request.config, Direction.FORWARD)
    inv = fwd.inverse()
    w, v = _observables(request)
    init = build_initial_state(request.initial, request.config.n_sites).amplitudes

    kicks = request.kicks()
    wanted = set(int(k) for k in kicks)
    psi = init.copy()
    vpsi = v(init.copy())
    done_kicks, values = [], []
    truncated = False
    for n in range(int(kicks[-1]) + 1):
        if n in wanted:
            if budget_s is not None and time.perf_counter() - start > budget_s:
                truncated = True
                break
            f = 1.0 + 0.0j if n == 0 else _echo(fwd, inv, w, v, psi, vpsi, n)
            done_kicks.append(n)
            values.append(f)
        if n < kicks[-1]:
            fwd.kick_inplace(psi)
            fwd.kick_inplace(vpsi)
    return OtocSeries(request, np.array(done_kicks), np.array(values), truncated=truncated)


def otoc_at_kick(request: OtocRequest, n: int) -> complex:
    """F(n) computed from scratch, without the incremental chains."""
    if n < 0:
        raise ConfigError(f"kick count must be >= 0, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    fwd = FloquetMap(request.config, Direction.FORWARD)
    inv = fwd.inverse()
    w, v = _observables(request)
    init = build_initial_state(request.initial, request.config.n_sites).amplitudes
    psi = init.copy()
    fwd.kick_inplace(psi, n)
    vpsi = v(init.copy())
    fwd.kick_inplace(vpsi, n)
    return _echo(fwd, inv, w, v, psi, vpsi, n)


def default_request(
    config: ModelConfig,
    axis: OtocAxis | str,
    separation: int,
    n_max: int,
    stride: int = 1,
    initial: InitialState | None = None,
    dense_until: int = 0,
) -> OtocRequest:
    """Observables on sites 0 and ``separation``."""
    return OtocRequest(config, OtocAxis(axis), 0, separation, n_max, stride, initial, dense_until)


__all__ = [
    "InitialKind",
    "InitialState",
    "OtocAxis",
    "OtocRequest",
    "OtocSeries",
    "compute_otoc_series",
    "default_request",
    "otoc_at_kick",
]
