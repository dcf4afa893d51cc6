import numpy as np
import pytest

import oracles
from floq_otoc import ModelConfig, UnsupportedCaseError
from floq_otoc.hbc import hbc_predict, measured_prefactor, supported_cases
from floq_otoc.otoc import OtocAxis, default_request, otoc_at_kick

AXIS = {OtocAxis.TM: "z", OtocAxis.LM: "x"}


def engine_c(axis, dl, n, tau, n_sites=10):
    req = default_request(ModelConfig.nonintegrable(n_sites, tau), axis, dl, n)
    return 1 - otoc_at_kick(req, n).real


def test_supported_cases_listed():
    cases = supported_cases()
    assert (OtocAxis.TM, 1, 1) in cases and len(cases) == 8


def test_unsupported_case():
    with pytest.raises(UnsupportedCaseError):
        hbc_predict("tm", 3, 1, 0.01)


@pytest.mark.parametrize("case,order", [(("tm", 1, 2), 2), (("tm", 2, 2), 6), (("lm", 1, 3), 6)])
def test_orders(case, order):
    assert hbc_predict(*case, tau=0.01).order == order


@pytest.mark.parametrize("key", sorted(measured_prefactor, key=str))
def test_recomputed_prefactors_against_dense_series_oracle(key):
    axis, dl, n = key
    order = hbc_predict(axis, dl, n, 1.0).order
    ref = oracles.leading_prefactor(6, AXIS[axis], dl, n, order)
    assert ref == pytest.approx(measured_prefactor[key], rel=1e-3)


@pytest.mark.parametrize("key", [(OtocAxis.TM, 2, 1), (OtocAxis.LM, 1, 1)])
def test_vanishing_leading_terms(key):
    axis, dl, n = key
    assert hbc_predict(axis, dl, n, 0.03).c_leading == 0
    assert engine_c(axis, dl, n, 0.03) < 1e-14


@pytest.mark.parametrize("key", sorted(measured_prefactor, key=str))
def test_engine_approaches_recomputed_term(key):
    axis, dl, n = key
    tau = 1e-3 if axis is OtocAxis.TM and dl == 1 else 1e-2
    pred = hbc_predict(axis, dl, n, tau, recomputed=True)
    assert engine_c(axis, dl, n, tau) == pytest.approx(pred.c_leading, rel=0.05)


@pytest.mark.parametrize("key", sorted(measured_prefactor, key=str))
def test_tau_scaling_slope(key):
    axis, dl, n = key
    order = hbc_predict(axis, dl, n, 1.0).order
    taus = np.array([5e-3, 1e-2])
    c = np.array([engine_c(axis, dl, n, t) for t in taus])
    slope = np.diff(np.log(c))[0] / np.diff(np.log(taus))[0]
    assert abs(slope - order) < 0.1


def test_tabulated_prefactors_differ_from_exact():
    # the tabulated nearest-neighbour TM terms are exactly half the exact ones
    for n in (1, 2, 3):
        assert measured_prefactor[(OtocAxis.TM, 1, n)] == 2 * hbc_predict("tm", 1, n, 1.0).c_leading
