"""Long-time OTOC series and saturation slopes over several fit windows.

Writes the series (plot-ready CSV) and prints envelope slopes for the window
[t_s, n_max] used by the region report, plus a few alternatives for comparison.

    python scripts/saturation_scan.py --variant nonintegrable --axis tm --delta-l 4
"""

import argparse

import numpy as np

from floq_otoc import ModelConfig, parse_tau
from floq_otoc.io import write_series_csv
from floq_otoc.otoc import compute_otoc_series, default_request
from floq_otoc.regions import InsufficientDataError, classify_regions, fit_saturation

p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
p.add_argument("--n-sites", type=int, default=12)
p.add_argument("--tau", default="eps/2")
p.add_argument("--axis", choices=["tm", "lm"], default="tm")
p.add_argument("--variant", choices=["integrable", "nonintegrable"], default="nonintegrable")
p.add_argument("--delta-l", type=int, default=4)
p.add_argument("--n-max", type=int, default=3000)
p.add_argument("--stride", type=int, default=10)
p.add_argument("--dense-until", type=int, default=200)
p.add_argument("--out", default="saturation_series.csv")
args = p.parse_args()

make = ModelConfig.integrable if args.variant == "integrable" else ModelConfig.nonintegrable
cfg = make(args.n_sites, parse_tau(args.tau))
req = default_request(cfg, args.axis, args.delta_l, args.n_max, args.stride, dense_until=args.dense_until)
series = compute_otoc_series(req)
write_series_csv(series, args.out)
rep = classify_regions(series)
print(f"t_char={rep.t_char} t_s={rep.t_s} b={rep.b:.3f} mu={rep.mu:.3e} revival={rep.revival_detected}")
if rep.t_s is not None:
    last = int(series.kicks[-1])
    for window in [(rep.t_s, last), (rep.t_s, 2 * rep.t_s), (rep.t_s, 5 * rep.t_s), (last // 4, last)]:
        for mode in ("envelope", "linear"):
            try:
                mu = fit_saturation(series, window, mode).mu
            except InsufficientDataError as exc:
                print(f"window {window} {mode}: {exc}")
                continue
            print(f"window {window} {mode:8s} mu={mu:+.3e}")
re = series.re_f
for n in (50, 100, 200, 500, 1000, 2000, args.n_max):
    hit = np.nonzero(series.kicks == n)[0]
    if hit.size:
        print(f"Re F({n}) = {re[hit[0]]:.4f}")
