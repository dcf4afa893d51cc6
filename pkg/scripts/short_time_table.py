"""Leading short-time OTOC terms: tabulated values versus exact evolution.

Prints C(n)/tau^order for the state-vector engine at decreasing tau next to
the tabulated prefactor and the recomputed one.
"""

from floq_otoc import ModelConfig
from floq_otoc.hbc import hbc_predict, supported_cases
from floq_otoc.otoc import default_request, otoc_at_kick

N_SITES = 10

print(f"{'case':10s} {'order':>5s} {'table':>8s} {'recomp':>8s}   C/tau^order at tau = 4e-2, 2e-2, 1e-2, 5e-3")
for axis, dl, n in supported_cases():
    pred = hbc_predict(axis, dl, n, 1.0)
    rec = hbc_predict(axis, dl, n, 1.0, recomputed=True)
    vals = []
    for tau in (4e-2, 2e-2, 1e-2, 5e-3):
        req = default_request(ModelConfig.nonintegrable(N_SITES, tau), axis, dl, n)
        vals.append((1 - otoc_at_kick(req, n).real) / tau**pred.order)
    label = f"{axis.value}{dl} n={n}"
    print(f"{label:10s} {pred.order:5d} {pred.c_leading:8.1f} {rec.c_leading:8.1f}   " + "  ".join(f"{v:10.4g}" for v in vals))
