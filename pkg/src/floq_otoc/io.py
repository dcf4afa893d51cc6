"""Run configuration files, series CSV and JSON manifests."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from floq_otoc import __version__
from floq_otoc.config import ModelConfig, Variant, parse_tau
from floq_otoc.errors import ConfigError
from floq_otoc.otoc import OtocAxis, OtocRequest, OtocSeries
from floq_otoc.spinchain import InitialKind, InitialState

SERIES_HEADER = "n,re_f,im_f,c"
CONFIG_KEYS = (
    "n_sites", "j_x", "h_x", "h_z", "tau", "variant", "axis",
    "l", "m", "n_max", "stride", "initial", "seed", "out_dir", "dense_until",
)  # fmt: skip
_INT_KEYS = {"n_sites", "l", "m", "n_max", "stride", "seed", "dense_until"}
_FLOAT_KEYS = {"j_x", "h_x", "h_z"}


def _fmt(x: float) -> str:
    # +0.0 folds -0.0 into 0 so identical runs print identically
    return "%.17g" % (float(x) + 0.0)


def write_series_csv(series: OtocSeries, path: str | Path) -> None:
    lines = [SERIES_HEADER]
    for n, f, c in zip(series.kicks, series.f_values, series.c_values):
        lines.append(f"{int(n)},{_fmt(f.real)},{_fmt(f.imag)},{_fmt(c)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_series_arrays(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    text = Path(path).read_text().splitlines()
    if not text or text[0].strip() != SERIES_HEADER:
        raise ConfigError(f"{path}: expected header {SERIES_HEADER!r}")
    rows = [line.split(",") for line in text[1:] if line.strip()]
    kicks = np.array([int(r[0]) for r in rows], dtype=np.int64)
    f = np.array([complex(float(r[1]), float(r[2])) for r in rows], dtype=np.complex128)
    c = np.array([float(r[3]) for r in rows], dtype=np.float64)
    return kicks, f, c


def read_series_csv(path: str | Path, request: OtocRequest) -> OtocSeries:
    kicks, f, c = read_series_arrays(path)
    return OtocSeries(request, kicks, f, c)


def _coerce(key: str, raw: str):
    raw = raw.strip()
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r} needs an integer, got {raw!r}") from None
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r} needs a number, got {raw!r}") from None
    if key == "tau":
        return parse_tau(raw.strip("\"'"))
    return raw.strip("\"'")


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out.update(apply_overrides({}, [f"{key}={value}"]))
    return out


def apply_overrides(values: dict, overrides) -> dict:
    values = dict(values)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, raw = (part.strip() for part in item.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def load_config(path: str | Path) -> dict:
    """Key-value config file, or a run manifest (JSON) for exact re-runs."""
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return manifest_to_values(json.loads(text))
    return parse_config_text(text)


def build_request(values: dict) -> OtocRequest:
    if "n_sites" not in values:
        raise ConfigError("config key 'n_sites' is required")
    h_x = float(values.get("h_x", 0.0))
    default_variant = Variant.INTEGRABLE if h_x == 0.0 else Variant.NONINTEGRABLE
    try:
        variant = Variant(values.get("variant", default_variant))
        axis = OtocAxis(values.get("axis", "tm"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    config = ModelConfig(
        n_sites=values["n_sites"],
        j_x=values.get("j_x", 1.0),
        h_x=h_x,
        h_z=values.get("h_z", 1.0),
        tau=values.get("tau", parse_tau("eps/2")),
        variant=variant,
    )
    initial = None
    if "initial" in values:
        try:
            kind = InitialKind(values["initial"])
        except ValueError:
            raise ConfigError(f"unknown initial state {values['initial']!r}") from None
        seed = values.get("seed", 0) if kind is InitialKind.HAAR_RANDOM else None
        initial = InitialState(kind, seed)
    return OtocRequest(
        config=config,
        axis=axis,
        l=values.get("l", 0),
        m=values.get("m", 1),
        n_max=values.get("n_max", 100),
        stride=values.get("stride", 1),
        initial=initial,
        dense_until=values.get("dense_until", 0),
    )


def request_to_dict(request: OtocRequest) -> dict:
    return {
        "axis": request.axis.value,
        "l": request.l,
        "m": request.m,
        "separation": request.separation,
        "ring_distance": request.ring_distance,
        "n_max": request.n_max,
        "stride": request.stride,
        "dense_until": request.dense_until,
        "initial": request.initial.kind.value,
        "seed": request.initial.seed,
    }


def make_manifest(
    request: OtocRequest,
    outputs: dict[str, str],
    wall_clock_s: float,
    truncated: bool = False,
    extra: dict | None = None,
) -> dict:
    manifest = {
        "tool": "floq-otoc",
        "version": __version__,
        "config": request.config.to_dict(),
        "request": request_to_dict(request),
        "seeds": [request.initial.seed] if request.initial.seed is not None else [],
        "wall_clock_s": wall_clock_s,
        "truncated": truncated,
        "outputs": outputs,
    }
    if extra:
        manifest.update(extra)
    return manifest


def manifest_to_values(manifest: dict) -> dict:
    cfg = manifest["config"]
    req = manifest["request"]
    values = {
        "n_sites": int(cfg["n_sites"]),
        "j_x": float(cfg["j_x"]),
        "h_x": float(cfg["h_x"]),
        "h_z": float(cfg["h_z"]),
        "tau": float(cfg["tau"]),
        "variant": cfg["variant"],
        "axis": req["axis"],
        "l": int(req["l"]),
        "m": int(req["m"]),
        "n_max": int(req["n_max"]),
        "stride": int(req["stride"]),
        "dense_until": int(req.get("dense_until", 0)),
        "initial": req["initial"],
    }
    if req.get("seed") is not None:
        values["seed"] = int(req["seed"])
    return values


def write_manifest(manifest: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def read_manifest(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
