"""Physical parameters of the kicked Ising ring."""

from __future__ import annotations

import enum
import math
import os
import re
from dataclasses import dataclass

from floq_otoc.errors import ConfigError

# Every figure of interest parameterizes the kick period in units of EPS/2.
EPS = math.pi / 28

DEFAULT_MAX_SITES = 24
MAX_SITES_ENV = "FLOQ_OTOC_MAX_SITES"


def max_sites() -> int:
    raw = os.environ.get(MAX_SITES_ENV)
    if raw is None:
        return DEFAULT_MAX_SITES
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{MAX_SITES_ENV} must be an integer, got {raw!r}") from exc
    if cap < 2:
        raise ConfigError(f"{MAX_SITES_ENV} must be >= 2, got {cap}")
    return cap


def check_n_sites(n_sites: int) -> None:
    cap = max_sites()
    if not isinstance(n_sites, (int,)) or isinstance(n_sites, bool):
        raise ConfigError(f"n_sites must be an integer, got {n_sites!r}")
    if not 2 <= n_sites <= cap:
        raise ConfigError(f"n_sites={n_sites} outside [2, {cap}]")


class Variant(str, enum.Enum):
    INTEGRABLE = "integrable"
    NONINTEGRABLE = "nonintegrable"


@dataclass(frozen=True)
class ModelConfig:
    """Ring of ``n_sites`` spins, Ising coupling along x, transverse kicks along z.

    ``variant=INTEGRABLE`` forbids a longitudinal field; with ``h_x = 0`` both
    variants produce identical dynamics.
    """

    n_sites: int
    j_x: float = 1.0
    h_x: float = 0.0
    h_z: float = 1.0
    tau: float = EPS / 2
    variant: Variant = Variant.INTEGRABLE

    def __post_init__(self):
        check_n_sites(self.n_sites)
        object.__setattr__(self, "variant", Variant(self.variant))
        for name in ("j_x", "h_x", "h_z", "tau"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.tau < 0:
            raise ConfigError(f"tau must be >= 0, got {self.tau}")
        if self.variant is Variant.INTEGRABLE and self.h_x != 0.0:
            raise ConfigError("integrable variant requires h_x = 0")

    @classmethod
    def integrable(cls, n_sites: int, tau: float, j_x: float = 1.0, h_z: float = 1.0) -> ModelConfig:
        return cls(n_sites, j_x=j_x, h_x=0.0, h_z=h_z, tau=tau, variant=Variant.INTEGRABLE)

    @classmethod
    def nonintegrable(
        cls, n_sites: int, tau: float, j_x: float = 1.0, h_x: float = 1.0, h_z: float = 1.0
    ) -> ModelConfig:
        return cls(n_sites, j_x=j_x, h_x=h_x, h_z=h_z, tau=tau, variant=Variant.NONINTEGRABLE)

    def to_dict(self) -> dict:
        return {
            "n_sites": self.n_sites,
            "j_x": self.j_x,
            "h_x": self.h_x,
            "h_z": self.h_z,
            "tau": self.tau,
            "variant": self.variant.value,
        }


_TAU_SHORTHAND = re.compile(
    r"^\s*(?P<num>[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)?\s*\*?\s*eps\s*(/\s*(?P<den>\d+(\.\d*)?))?\s*$"
)


def parse_tau(text: str | float) -> float:
    """Parse a kick period, accepting ``"6eps/2"``-style shorthand (eps = pi/28).

    >>> round(parse_tau("2eps/2") / EPS, 12)
    1.0
    >>> parse_tau("0.25")
    0.25
    """
    if isinstance(text, (int, float)):
        return float(text)
    m = _TAU_SHORTHAND.match(text)
    if m:
        num = float(m.group("num")) if m.group("num") else 1.0
        den = float(m.group("den")) if m.group("den") else 1.0
        if den == 0:
            raise ConfigError(f"zero denominator in tau {text!r}")
        return num * EPS / den
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse tau {text!r}") from exc
