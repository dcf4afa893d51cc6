"""Leading short-time OTOC terms from nested-commutator (BCH) expansions.

Only a fixed table of low-order cases is provided; there is no symbolic
commutator engine. Values are the tabulated leading terms for the
nonintegrable map with J_x = h_x = h_z = 1 and observables at l, l + delta_l.
Note that the exact dynamics give twice the TM prefactors below (8 n^2 tau^2
rather than 4 n^2 tau^2), and the C_x(3) entry is off by a factor of 8;
the powers of tau are right in every case. ``measured_prefactor`` records
what the echo engine converges to as tau -> 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from floq_otoc.errors import UnsupportedCaseError
from floq_otoc.otoc import OtocAxis

# (axis, delta_l, n) -> (prefactor, power of tau)
_TABLE = {
    (OtocAxis.TM, 1, 1): (4.0, 2),
    (OtocAxis.TM, 1, 2): (16.0, 2),
    (OtocAxis.TM, 1, 3): (36.0, 2),
    (OtocAxis.TM, 2, 1): (0.0, 6),
    (OtocAxis.TM, 2, 2): (64.0, 6),
    (OtocAxis.LM, 1, 1): (0.0, 6),
    (OtocAxis.LM, 1, 2): (64.0, 6),
    (OtocAxis.LM, 1, 3): (256.0, 6),
}

# tau -> 0 limit of C / tau^order from exact evolution (N >= 6)
measured_prefactor = {
    (OtocAxis.TM, 1, 1): 8.0,
    (OtocAxis.TM, 1, 2): 32.0,
    (OtocAxis.TM, 1, 3): 72.0,
    (OtocAxis.TM, 2, 2): 128.0,
    (OtocAxis.LM, 1, 2): 128.0,
    (OtocAxis.LM, 1, 3): 2048.0,
}


@dataclass(frozen=True)
class HbcPrediction:
    axis: OtocAxis
    delta_l: int
    n: int
    tau: float
    c_leading: float
    order: int


def supported_cases() -> list[tuple[OtocAxis, int, int]]:
    return sorted(_TABLE, key=lambda k: (k[0].value, k[1], k[2]))


def hbc_predict(
    axis: OtocAxis | str, delta_l: int, n: int, tau: float, recomputed: bool = False
) -> HbcPrediction:
    """Leading term of C(n) for small tau.

    With ``recomputed=True`` the prefactor comes from ``measured_prefactor``
    where one is known; the tau power is always the tabulated one.
    """
    axis = OtocAxis(axis)
    key = (axis, delta_l, n)
    try:
        prefactor, order = _TABLE[key]
    except KeyError:
        raise UnsupportedCaseError(
            f"no tabulated short-time term for axis={axis.value}, delta_l={delta_l}, n={n}"
        ) from None
    if recomputed:
        prefactor = measured_prefactor.get(key, prefactor)
    return HbcPrediction(axis, delta_l, n, tau, prefactor * tau**order, order)
