"""Characteristic / dynamic / near-saturation segmentation of an OTOC series.

Conventions:

* characteristic kick: first evaluated kick with C(n) > threshold (1e-10 by
  default, just above accumulated round-off);
* saturation onset t_s: first kick at which the centered 5-point moving
  average of C exceeds 0.9 times the mean of the trailing quarter of the
  series, provided the crossing happens before that trailing quarter;
* dynamic window: [t_char + 1, t_s - 1], fitted as a straight line in log C
  against log n;
* saturation slope mu: minus the least-squares slope of Re F (or of its
  local maxima) against n, so a decaying envelope has mu > 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats

from floq_otoc.config import Variant
from floq_otoc.errors import FitDomainError, InsufficientDataError
from floq_otoc.otoc import OtocAxis, OtocSeries

DEFAULT_THRESHOLD = 1e-10
REVIVAL_TOLERANCE = 1e-3
MIN_POWER_LAW_POINTS = 4
MIN_SATURATION_POINTS = 10


class ProfileModel(str, enum.Enum):
    TRIANGULAR = "triangular"  # b = b_max - kappa |N/2 - dl|
    QUADRATIC = "quadratic"  # b = b_max - lambda |N/2 - dl|^2


class SaturationMode(str, enum.Enum):
    LINEAR = "linear"
    ENVELOPE = "envelope"
    REVIVAL = "revival"


class PowerLawFit(NamedTuple):
    b: float
    prefactor: float
    stderr: float


class SaturationFit(NamedTuple):
    mu: float
    revival_detected: bool


@dataclass(frozen=True)
class ExponentProfile:
    separations: np.ndarray
    exponents: np.ndarray
    model: ProfileModel
    kappa_or_lambda: float
    b_max: float
    b_at_edge: float
    residual: float
    n_sites: int

    def predict(self, delta_l) -> np.ndarray:
        power = 1 if self.model is ProfileModel.TRIANGULAR else 2
        dist = np.abs(self.n_sites / 2 - np.asarray(delta_l, dtype=float))
        return self.b_max - self.kappa_or_lambda * dist**power


@dataclass(frozen=True)
class RegionReport:
    t_char: int | None
    dynamic_window: tuple[int, int] | None
    b: float
    b_stderr: float
    prefactor: float
    t_s: int | None
    mu: float
    revival_detected: bool | None
    saturation_mode: SaturationMode | None = None

    def to_dict(self) -> dict:
        def clean(x):
            if isinstance(x, float) and not math.isfinite(x):
                return None
            return x

        return {
            "t_char": self.t_char,
            "dynamic_window": list(self.dynamic_window) if self.dynamic_window else None,
            "b": clean(self.b),
            "b_stderr": clean(self.b_stderr),
            "prefactor": clean(self.prefactor),
            "t_s": self.t_s,
            "mu": clean(self.mu),
            "revival_detected": self.revival_detected,
            "saturation_mode": self.saturation_mode.value if self.saturation_mode else None,
        }


def detect_characteristic_kick(series: OtocSeries, threshold: float = DEFAULT_THRESHOLD) -> int | None:
    """Smallest evaluated kick with C > threshold, or None if C never departs.

    The answer is only meaningful if every kick up to the departure was
    evaluated (stride 1 prefix).
    """
    hits = np.nonzero(series.c_values > threshold)[0]
    if hits.size == 0:
        return None
    return int(series.kicks[hits[0]])


def _window_mask(kicks: np.ndarray, window: tuple[int, int]) -> np.ndarray:
    lo, hi = window
    return (kicks >= lo) & (kicks <= hi)


def power_law(n: np.ndarray, c: np.ndarray) -> PowerLawFit:
    n = np.asarray(n, dtype=float)
    c = np.asarray(c, dtype=float)
    if n.size < MIN_POWER_LAW_POINTS:
        raise InsufficientDataError(f"power-law fit needs >= {MIN_POWER_LAW_POINTS} points, got {n.size}")
    if np.any(c <= 0) or np.any(n <= 0):
        raise FitDomainError("power-law fit needs strictly positive n and C")
    res = stats.linregress(np.log(n), np.log(c))
    return PowerLawFit(float(res.slope), float(np.exp(res.intercept)), float(res.stderr))


def fit_power_law(series: OtocSeries, window: tuple[int, int]) -> PowerLawFit:
    """Fit C(n) = A n^b over the kicks in ``window`` (inclusive)."""
    sel = _window_mask(series.kicks, window)
    return power_law(series.kicks[sel], series.c_values[sel])


def fit_exponent_profile(
    points: Sequence[tuple[int, float]], n_sites: int, model: ProfileModel | str = ProfileModel.TRIANGULAR
) -> ExponentProfile:
    """Least-squares (b_max, kappa) or (b_max, lambda) with the vertex at N/2."""
    model = ProfileModel(model)
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 3 or np.unique(arr[:, 0]).size < 3:
        raise InsufficientDataError("exponent profile needs >= 3 distinct separations")
    dl, b = arr[:, 0], arr[:, 1]
    power = 1 if model is ProfileModel.TRIANGULAR else 2
    design = np.column_stack([np.ones_like(dl), -np.abs(n_sites / 2 - dl) ** power])
    (b_max, slope), *_ = np.linalg.lstsq(design, b, rcond=None)
    resid = b - design @ np.array([b_max, slope])
    order = np.argsort(dl)
    return ExponentProfile(
        separations=dl[order].astype(int),
        exponents=b[order],
        model=model,
        kappa_or_lambda=float(slope),
        b_max=float(b_max),
        b_at_edge=float(b[order][0]),
        residual=float(np.sqrt(np.mean(resid**2))),
        n_sites=n_sites,
    )


def local_maxima(values: np.ndarray) -> np.ndarray:
    """Indices of 3-point local maxima; of two equal neighbours the earlier wins."""
    v = np.asarray(values)
    if v.size < 3:
        return np.array([], dtype=int)
    mid = v[1:-1]
    is_max = (mid > v[:-2]) & (mid >= v[2:])
    return np.nonzero(is_max)[0] + 1


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    return float(stats.linregress(x.astype(float), y).slope)


def fit_saturation(
    series: OtocSeries, window: tuple[int, int], mode: SaturationMode | str = SaturationMode.ENVELOPE
) -> SaturationFit:
    mode = SaturationMode(mode)
    sel = _window_mask(series.kicks, window)
    n = series.kicks[sel]
    re = series.re_f[sel]
    if n.size < MIN_SATURATION_POINTS:
        raise InsufficientDataError(
            f"saturation window needs >= {MIN_SATURATION_POINTS} evaluated points, got {n.size}"
        )
    revival = bool(np.any(np.abs(1.0 - re) <= REVIVAL_TOLERANCE))
    if mode is SaturationMode.REVIVAL:
        return SaturationFit(math.nan, revival)
    if mode is SaturationMode.LINEAR:
        return SaturationFit(-_slope(n, re), revival)
    peaks = local_maxima(re)
    if peaks.size < 2:
        raise InsufficientDataError("fewer than two local maxima in the saturation window")
    return SaturationFit(-_slope(n[peaks], re[peaks]), revival)


def saturation_onset(series: OtocSeries, start: int = 0) -> int | None:
    """First kick whose centred 5-point moving average of C exceeds 0.9x the
    mean of C over the last quarter of the kick range.

    The quarter is measured in kicks, not in evaluated points, so a dense
    prefix followed by strided sampling does not shift it.
    """
    c = series.c_values
    kicks = series.kicks
    if c.size < 8:
        return None
    tail_kick = kicks[0] + 0.75 * (kicks[-1] - kicks[0])
    tail = c[kicks >= tail_kick].mean()
    avg = np.convolve(c, np.ones(5) / 5, mode="valid")  # avg[i] centred at i + 2
    for i, a in enumerate(avg):
        centre = i + 2
        if kicks[centre] >= tail_kick:
            break
        if kicks[centre] >= start and a > 0.9 * tail:
            return int(kicks[centre])
    return None


def default_saturation_mode(series: OtocSeries) -> SaturationMode:
    req = series.request
    integrable = req.config.variant is Variant.INTEGRABLE or req.config.h_x == 0.0
    if req.axis is OtocAxis.TM and integrable:
        return SaturationMode.REVIVAL
    return SaturationMode.ENVELOPE


def classify_regions(
    series: OtocSeries,
    threshold: float = DEFAULT_THRESHOLD,
    saturation_mode: SaturationMode | str | None = None,
) -> RegionReport:
    nan = math.nan
    t_char = detect_characteristic_kick(series, threshold)
    if t_char is None:
        return RegionReport(None, None, nan, nan, nan, None, nan, None)
    t_s = saturation_onset(series, start=t_char + 1)
    hi = t_s - 1 if t_s is not None else int(series.kicks[-1])
    window = (t_char + 1, hi)
    b = stderr = prefactor = nan
    sel = _window_mask(series.kicks, window)
    if np.count_nonzero(sel) >= MIN_POWER_LAW_POINTS:
        b, prefactor, stderr = fit_power_law(series, window)
    if t_s is None:
        return RegionReport(t_char, window, b, stderr, prefactor, None, nan, None)
    mode = SaturationMode(saturation_mode) if saturation_mode else default_saturation_mode(series)
    sat_window = (t_s, int(series.kicks[-1]))
    try:
        mu, revival = fit_saturation(series, sat_window, mode)
    except InsufficientDataError:
        mu, revival = nan, None
    return RegionReport(t_char, window, b, stderr, prefactor, t_s, mu, revival, mode)
