"""floq-otoc command line: run, sweep, analyze, validate.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 budget truncation.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from floq_otoc.config import parse_tau
from floq_otoc.errors import ConfigError, InsufficientDataError
from floq_otoc.io import (
    apply_overrides,
    build_request,
    load_config,
    make_manifest,
    read_manifest,
    read_series_csv,
    write_manifest,
    write_series_csv,
)
from floq_otoc.otoc import OtocRequest, compute_otoc_series
from floq_otoc.regions import (
    DEFAULT_THRESHOLD,
    ProfileModel,
    classify_regions,
    fit_exponent_profile,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_TRUNCATED = 0, 1, 2, 3
SWEEP_KEYS = {"tau": "tau", "delta_l": "m", "n_sites": "n_sites"}

log = logging.getLogger("floq_otoc")


class UsageError(Exception):
    pass


def _values_from_args(args) -> dict:
    values = load_config(args.config) if args.config else {}
    values = apply_overrides(values, args.set or [])
    if getattr(args, "stride", None) is not None:
        values["stride"] = args.stride
    if getattr(args, "out", None) is not None:
        values["out_dir"] = args.out
    return values


def _run_one(request: OtocRequest, budget_s):
    start = time.perf_counter()
    series = compute_otoc_series(request, budget_s=budget_s)
    return series, time.perf_counter() - start


def _emit_run(series, request, out_dir: Path, elapsed: float, extra=None) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_series_csv(series, out_dir / "series.csv")
    manifest = make_manifest(request, {"series": "series.csv"}, elapsed, series.truncated, extra)
    write_manifest(manifest, out_dir / "manifest.json")
    return manifest


def cmd_run(args) -> int:
    values = _values_from_args(args)
    request = build_request(values)
    out_dir = Path(values.get("out_dir", "out"))
    series, elapsed = _run_one(request, args.budget)
    _emit_run(series, request, out_dir, elapsed)
    print(f"wrote {len(series)} rows to {out_dir / 'series.csv'}")
    if series.truncated:
        print("budget exceeded: series truncated", file=sys.stderr)
        return EXIT_TRUNCATED
    return EXIT_OK


def _sweep_request(values: dict, key: str, raw: str) -> tuple[object, OtocRequest]:
    v = dict(values)
    if key == "tau":
        value = parse_tau(raw)
        v["tau"] = value
    elif key == "delta_l":
        value = int(raw)
        v["m"] = (v.get("l", 0) + value) % v["n_sites"] if "n_sites" in v else value
    else:
        value = int(raw)
        v["n_sites"] = value
    return value, build_request(v)


def _profile_row(key, value, series, threshold):
    report = classify_regions(series, threshold=threshold)

    def num(x):
        if x is None or (isinstance(x, float) and not math.isfinite(x)):
            return ""
        return "%.17g" % x if isinstance(x, float) else str(x)

    return report, [num(value), num(report.t_char), num(report.t_s), num(report.b), num(report.b_stderr), num(report.mu)]


def cmd_sweep(args) -> int:
    values = _values_from_args(args)
    raw_values = [v for v in (args.values or "").split(",") if v.strip()]
    if not raw_values:
        raise UsageError("sweep needs a non-empty --values list")
    key = args.over
    out_root = Path(values.get("out_dir", "out"))
    jobs = []
    for raw in raw_values:
        try:
            jobs.append(_sweep_request(values, key, raw.strip()))
        except ValueError as exc:
            raise ConfigError(f"bad sweep value {raw!r}: {exc}") from None

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, [r for _, r in jobs], [args.budget] * len(jobs)))
    else:
        results = [_run_one(r, args.budget) for _, r in jobs]

    truncated = False
    rows = []
    points = []
    run_dirs = []
    for (value, request), (series, elapsed) in zip(jobs, results):
        sub = out_root / f"{key}_{value}"
        _emit_run(series, request, sub, elapsed, {"sweep": {"over": key, "value": value}})
        run_dirs.append(str(sub.relative_to(out_root)))
        truncated |= series.truncated
        report, row = _profile_row(key, value, series, args.threshold)
        rows.append(row)
        if key == "delta_l" and math.isfinite(report.b):
            points.append((value, report.b))

    header = [key, "t_char", "t_s", "b", "b_stderr", "mu"]
    if key == "delta_l":
        header = ["delta_l", "b", "b_stderr", "t_char", "t_s", "mu"]
        rows = [[r[0], r[3], r[4], r[1], r[2], r[5]] for r in rows]
    with open(out_root / "profile.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)

    outputs = {"profile": "profile.csv"}
    if key == "delta_l":
        try:
            fit = fit_exponent_profile(points, jobs[0][1].config.n_sites, ProfileModel(args.profile_model))
            fit_doc = {
                "model": fit.model.value,
                "kappa_or_lambda": fit.kappa_or_lambda,
                "b_max": fit.b_max,
                "b_at_edge": fit.b_at_edge,
                "residual": fit.residual,
                "separations": fit.separations.tolist(),
                "exponents": fit.exponents.tolist(),
            }
            (out_root / "profile_fit.json").write_text(json.dumps(fit_doc, indent=2) + "\n")
            outputs["profile_fit"] = "profile_fit.json"
        except InsufficientDataError as exc:
            log.warning("no exponent-profile fit: %s", exc)
    sweep_manifest = {
        "tool": "floq-otoc",
        "sweep": {"over": key, "values": [str(v) for v in raw_values]},
        "runs": run_dirs,
        "outputs": outputs,
        "truncated": truncated,
    }
    write_manifest(sweep_manifest, out_root / "manifest.json")
    print(f"wrote {len(jobs)} series and {out_root / 'profile.csv'}")
    return EXIT_TRUNCATED if truncated else EXIT_OK


def cmd_analyze(args) -> int:
    series_path = Path(args.series)
    manifest_path = Path(args.manifest) if args.manifest else series_path.with_name("manifest.json")
    if not manifest_path.exists():
        raise UsageError(f"analyze needs the run manifest ({manifest_path} not found)")
    from floq_otoc.io import manifest_to_values

    request = build_request(manifest_to_values(read_manifest(manifest_path)))
    series = read_series_csv(series_path, request)
    report = classify_regions(series, threshold=args.threshold)
    text = json.dumps(report.to_dict(), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    from floq_otoc.validate import format_report, run_validation

    results = run_validation(args.level, inject_fault=args.inject_fault)
    print(format_report(results))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        doc = {"level": args.level, "checks": [r.to_dict() for r in results]}
        (out / "validate_report.json").write_text(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="floq-otoc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value config file or a run manifest.json")
        p.add_argument("--out", help="output directory (overrides out_dir)")
        p.add_argument("--stride", type=int, help="evaluate every k-th kick")
        p.add_argument("--budget", type=float, default=None, help="wall-clock seconds per series")
        p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")

    p_run = sub.add_parser("run", help="compute one OTOC series")
    common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="one series per value of a swept parameter")
    common(p_sweep)
    p_sweep.add_argument("--over", choices=sorted(SWEEP_KEYS), required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated list")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument(
        "--profile-model", choices=[m.value for m in ProfileModel], default=ProfileModel.TRIANGULAR.value
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_an = sub.add_parser("analyze", help="region report for an existing series.csv")
    p_an.add_argument("series")
    p_an.add_argument("--manifest")
    p_an.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p_an.add_argument("--out", help="also write the report JSON here")
    p_an.set_defaults(func=cmd_analyze)

    p_val = sub.add_parser("validate", help="cross-checks against independent oracles")
    p_val.add_argument("--level", choices=["quick", "full"], default="quick")
    p_val.add_argument("--out", help="directory for validate_report.json")
    p_val.add_argument("--inject-fault", choices=["gamma"], default=None, help=argparse.SUPPRESS)
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
