"""Self-checks run by ``floq-otoc validate``.

Every check compares the engine against something computed independently:
the per-momentum closed form, dense matrices, synthetic fitter data, or
exact symmetries. Quick stays at N <= 8, Full goes to N <= 12.
"""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from floq_otoc.analytic import analytic_series, build_tables, momentum_floquet_matrix, phi_psi
from floq_otoc.config import EPS, ModelConfig
from floq_otoc.floquet import Direction, FloquetMap
from floq_otoc.hbc import _TABLE, hbc_predict
from floq_otoc.otoc import OtocAxis, compute_otoc_series, default_request, otoc_at_kick
from floq_otoc.reference import dense_otoc
from floq_otoc.regions import ProfileModel, SaturationMode, detect_characteristic_kick, fit_exponent_profile, fit_saturation
from floq_otoc.spinchain import InitialState, build_initial_state

LEVELS = ("quick", "full")


@dataclass
class CheckResult:
    name: str
    module: str
    passed: bool
    measured: float
    expected: str
    detail: str = ""
    seconds: float = 0.0

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.measured = float(self.measured)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if not math.isfinite(d["measured"]):
            d["measured"] = str(d["measured"])
        return d


def _corrupt_gamma(tables):
    return dataclasses.replace(tables, gamma=tables.gamma * 1.01)


def check_analytic_equivalence(sizes, n_max=50, inject_fault=None) -> CheckResult:
    worst = 0.0
    for n in sizes:
        for tau in (np.pi / 56, np.pi / 28):
            tables = build_tables(n, tau)
            if inject_fault == "gamma":
                tables = _corrupt_gamma(tables)
            for dl in (1, 2, 3):
                a = analytic_series(n, tau, dl, n_max, tables=tables)
                e = compute_otoc_series(default_request(ModelConfig.integrable(n, tau), "tm", dl, n_max))
                worst = max(worst, float(np.max(np.abs(a.f_values - e.f_values))))
    return CheckResult(
        "analytic vs echo TMOTOC", "analytic-integrable", worst <= 1e-8, worst, "<= 1e-8",
        f"N in {list(sizes)}, n <= {n_max}, delta_l 1..3",
    )


def check_momentum_oracle(sizes) -> CheckResult:
    worst = 0.0
    for n in sizes:
        for tau in (np.pi / 56, np.pi / 28, 0.3):
            tables = build_tables(n, tau)
            for k in (0, 1, 3, 7, 20):
                pp = phi_psi(tables, k)
                for j, q in enumerate(tables.grid.momenta):
                    m = np.linalg.matrix_power(momentum_floquet_matrix(q, tau), k)
                    worst = max(worst, abs(pp.phi[j] - m[0, 0]), abs(pp.psi[j] - m[1, 0]))
    return CheckResult(
        "Phi/Psi vs 2x2 matrix powers", "analytic-integrable", worst <= 1e-10, worst, "<= 1e-10"
    )


def _hbc_cases():
    yield (OtocAxis.TM, 1, 1, 1e-3, 0.02)
    yield (OtocAxis.TM, 1, 2, 1e-3, 0.02)
    yield (OtocAxis.TM, 1, 3, 1e-3, 0.02)
    yield (OtocAxis.TM, 2, 2, 3e-2, 0.10)
    yield (OtocAxis.LM, 1, 2, 3e-2, 0.10)
    yield (OtocAxis.LM, 1, 3, 3e-2, 0.10)


def _short_time_c(n_sites, axis, dl, n, tau):
    req = default_request(ModelConfig.nonintegrable(n_sites, tau), axis, dl, n)
    return 1.0 - otoc_at_kick(req, n).real


def check_hbc_prefactors(n_sites) -> CheckResult:
    worst = 0.0
    notes = []
    for axis, dl, n, tau, _tol in _hbc_cases():
        pred = hbc_predict(axis, dl, n, tau, recomputed=True)
        c = _short_time_c(n_sites, axis, dl, n, tau)
        rel = abs(c / pred.c_leading - 1)
        worst = max(worst, rel)
        tabulated = _TABLE[(axis, dl, n)][0]
        notes.append(f"{axis.value}{dl}n{n}: C/tau^{pred.order}={c / tau**pred.order:.4g} (table {tabulated:g})")
    return CheckResult(
        "short-time leading terms (recomputed prefactors)", "hbc-oracle", worst <= 0.10, worst,
        "relative error <= 0.10", "; ".join(notes),
    )


def check_hbc_orders(n_sites) -> CheckResult:
    worst = 0.0
    notes = []
    for axis, dl, n, tau, _tol in _hbc_cases():
        order = hbc_predict(axis, dl, n, tau).order
        taus = np.array([tau / 2, tau])
        cs = np.array([_short_time_c(n_sites, axis, dl, n, t) for t in taus])
        slope = float(np.diff(np.log(cs))[0] / np.diff(np.log(taus))[0])
        worst = max(worst, abs(slope - order))
        notes.append(f"{axis.value}{dl}n{n}: {slope:.3f} vs {order}")
    return CheckResult(
        "short-time tau-scaling order", "hbc-oracle", worst <= 0.1, worst, "|slope - order| <= 0.1",
        "; ".join(notes),
    )


def check_dense_oracle(sizes) -> CheckResult:
    worst = 0.0
    for n in sizes:
        for cfg in (ModelConfig.integrable(n, 0.4), ModelConfig.nonintegrable(n, 0.3)):
            for axis, dl in (("tm", 1), ("lm", 2), ("tm", n - 1)):
                req = default_request(cfg, axis, dl, 12)
                psi = build_initial_state(req.initial, n).amplitudes
                ref = dense_otoc(cfg, req.axis.pauli.value, req.l, req.m, 12, psi)
                got = compute_otoc_series(req).f_values
                worst = max(worst, float(np.max(np.abs(ref - got))))
    return CheckResult("echo vs dense matrices", "otoc-engine", worst <= 1e-10, worst, "<= 1e-10")


def check_unitarity(n_sites, kicks=1000) -> CheckResult:
    cfg = ModelConfig.nonintegrable(n_sites, EPS / 2)
    fwd = FloquetMap(cfg, Direction.FORWARD)
    v = build_initial_state(InitialState.haar(7), n_sites).amplitudes.copy()
    start = v.copy()
    fwd.kick_inplace(v, kicks)
    drift = abs(np.linalg.norm(v) - 1.0)
    fwd.inverse().kick_inplace(v, kicks)
    back = float(np.max(np.abs(v - start)))
    measured = max(drift / 1e-12, back / 1e-11)
    return CheckResult(
        "norm drift and echo reversal", "floquet-evolution", measured <= 1.0, measured,
        "drift/1e-12 and reversal/1e-11 both <= 1", f"drift={drift:.2e}, reversal={back:.2e}, {kicks} kicks",
    )


def check_reflection(n_sites) -> CheckResult:
    worst = 0.0
    for cfg in (ModelConfig.integrable(n_sites, EPS / 2), ModelConfig.nonintegrable(n_sites, EPS / 2)):
        for axis in ("tm", "lm"):
            for d in range(1, n_sites // 2):
                a = compute_otoc_series(default_request(cfg, axis, d, 40)).f_values
                b = compute_otoc_series(default_request(cfg, axis, n_sites - d, 40)).f_values
                worst = max(worst, float(np.max(np.abs(a - b))))
    return CheckResult("ring reflection d <-> N-d", "otoc-engine", worst <= 1e-10, worst, "<= 1e-10")


def check_characteristic_kick(n_sites) -> CheckResult:
    bad = []
    for make in (ModelConfig.integrable, ModelConfig.nonintegrable):
        cfg = make(n_sites, 9 * EPS / 2)
        for axis, offset in (("tm", 0), ("lm", 1)):
            for dl in (2, 3):
                for init in (None, InitialState.haar(11)):
                    s = compute_otoc_series(default_request(cfg, axis, dl, dl + 3, initial=init))
                    t = detect_characteristic_kick(s)
                    if t != dl + offset:
                        bad.append(f"{cfg.variant.value}/{axis}/dl={dl}: {t} != {dl + offset}")
    return CheckResult(
        "characteristic kick = delta_l (TM), delta_l+1 (LM)", "otoc-engine", not bad, float(len(bad)),
        "0 mismatches", "; ".join(bad),
    )


def check_self_consistency(n_sites) -> CheckResult:
    req = default_request(ModelConfig.nonintegrable(n_sites, 0.2), "lm", 2, 30)
    series = compute_otoc_series(req)
    worst = max(abs(series.f_values[n] - otoc_at_kick(req, n)) for n in (1, 7, 30))
    return CheckResult("incremental vs from-scratch F(n)", "otoc-engine", worst <= 1e-12, worst, "<= 1e-12")


def check_fitters() -> CheckResult:
    dl = np.arange(1, 18)
    b = 29 - 3.2 * np.abs(dl - 9)
    prof = fit_exponent_profile(list(zip(dl, b)), 18, ProfileModel.TRIANGULAR)
    err = max(abs(prof.kappa_or_lambda - 3.2), abs(prof.b_max - 29))
    n = np.arange(0, 200)
    req = default_request(ModelConfig.integrable(8, 0.1), "tm", 1, 199)
    from floq_otoc.otoc import OtocSeries

    s = OtocSeries(req, n, 1 - 0.003 * n + 0j)
    mu = fit_saturation(s, (50, 199), SaturationMode.LINEAR).mu
    err = max(err, abs(mu - 0.003))
    return CheckResult("fitters on synthetic data", "region-analysis", err <= 1e-9, err, "<= 1e-9")


def _plan(level: str, inject_fault) -> list[Callable[[], CheckResult]]:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    full = level == "full"
    sizes = (6, 8, 10, 12) if full else (6, 8)
    big = 12 if full else 8
    plan = [
        lambda: check_analytic_equivalence(sizes, inject_fault=inject_fault),
        lambda: check_momentum_oracle(sizes),
        lambda: check_hbc_prefactors(10 if full else 8),
        lambda: check_dense_oracle((4, 6)),
        lambda: check_unitarity(big),
        lambda: check_reflection(big if full else 8),
        lambda: check_characteristic_kick(big),
        lambda: check_self_consistency(big),
        check_fitters,
    ]
    if full:
        plan.insert(3, lambda: check_hbc_orders(10))
    return plan


def run_validation(level: str = "quick", inject_fault: str | None = None) -> list[CheckResult]:
    results = []
    for check in _plan(level, inject_fault):
        t0 = time.perf_counter()
        r = check()
        r.seconds = time.perf_counter() - t0
        results.append(r)
    return results


def format_report(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        lines.append(f"[{tag}] {r.module}: {r.name}: measured {r.measured:.3g}, expected {r.expected} ({r.seconds:.1f}s)")
        if r.detail and not r.passed:
            lines.append(f"       {r.detail}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
