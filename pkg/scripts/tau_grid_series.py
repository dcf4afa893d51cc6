"""Plot-ready C(n) curves over the tau grid (tau = k eps/2, k = 1..11) for one separation."""

import argparse
import csv

import numpy as np

from floq_otoc import EPS, ModelConfig
from floq_otoc.otoc import compute_otoc_series, default_request

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--n-sites", type=int, default=12)
p.add_argument("--axis", choices=["tm", "lm"], default="tm")
p.add_argument("--variant", choices=["integrable", "nonintegrable"], default="integrable")
p.add_argument("--delta-l", type=int, default=3)
p.add_argument("--n-max", type=int, default=200)
p.add_argument("--out", default="tau_grid.csv")
args = p.parse_args()

make = ModelConfig.integrable if args.variant == "integrable" else ModelConfig.nonintegrable
cols = {}
for k in range(1, 12):
    s = compute_otoc_series(default_request(make(args.n_sites, k * EPS / 2), args.axis, args.delta_l, args.n_max))
    cols[f"c_tau{k}"] = s.c_values
    first = int(s.kicks[np.argmax(s.c_values > 0.1)]) if np.any(s.c_values > 0.1) else None
    print(f"tau={k}eps/2  t_char={int(s.kicks[np.argmax(s.c_values > 1e-10)])}  first C>0.1 at n={first}")
with open(args.out, "w", newline="") as fh:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", *cols])
    for i in range(args.n_max + 1):
        w.writerow([i, *("%.17g" % cols[c][i] for c in cols)])
