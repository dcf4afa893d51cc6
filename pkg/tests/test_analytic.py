import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floq_otoc import ModelConfig, UnsupportedCaseError
from floq_otoc.analytic import (
    GammaForm,
    MomentumGrid,
    analytic_series,
    analytic_tmotoc,
    build_tables,
    momentum_floquet_matrix,
    phi_psi,
)
from floq_otoc.otoc import compute_otoc_series, default_request


def test_grid_is_symmetric_and_excludes_zero():
    g = MomentumGrid.even_sector(8)
    np.testing.assert_allclose(g.momenta, -g.momenta[g.negated], atol=1e-15)
    assert np.min(np.abs(g.momenta)) == pytest.approx(np.pi / 8)


def test_odd_n_unsupported():
    with pytest.raises(UnsupportedCaseError):
        build_tables(7, 0.1)


def test_momentum_matrix_is_unitary():
    m = momentum_floquet_matrix(0.7, 0.3)
    np.testing.assert_allclose(m.conj().T @ m, np.eye(2), atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(tau=st.floats(1e-3, 0.7), n=st.integers(0, 60), half=st.integers(2, 8))
def test_phi_psi_match_matrix_powers(tau, n, half):
    t = build_tables(2 * half, tau)
    pp = phi_psi(t, n)
    for j, q in enumerate(t.grid.momenta):
        u = np.linalg.matrix_power(momentum_floquet_matrix(q, tau), n)
        assert abs(pp.phi[j] - u[0, 0]) <= 1e-10
        assert abs(pp.psi[j] - u[1, 0]) <= 1e-10


@pytest.mark.parametrize("tau", [0.0, 1e-12, np.pi / 4])
def test_degenerate_tau(tau):
    t = build_tables(6, tau)
    pp = phi_psi(t, 3)
    for j, q in enumerate(t.grid.momenta):
        u = np.linalg.matrix_power(momentum_floquet_matrix(q, tau), 3)
        assert abs(pp.phi[j] - u[0, 0]) <= 1e-10


def test_coefficients_normalized():
    t = build_tables(10, 0.2)
    np.testing.assert_allclose(t.alpha_plus**2 + np.abs(t.beta_plus) ** 2, 1, atol=1e-13)
    np.testing.assert_allclose(t.alpha_minus**2 + np.abs(t.beta_minus) ** 2, 1, atol=1e-13)


def test_printed_gamma_form_fails_initial_condition():
    sym = build_tables(8, np.pi / 28)
    printed = build_tables(8, np.pi / 28, GammaForm.PRINTED)
    np.testing.assert_allclose(phi_psi(sym, 0).phi, 1, atol=1e-12)
    assert np.max(np.abs(phi_psi(printed, 0).phi - 1)) > 1e-3


@pytest.mark.parametrize("n", [6, 8, 10])
def test_direct_and_factorized_sums_agree(n):
    t = build_tables(n, np.pi / 28)
    for dl in range(1, n):
        for k in (0, 3, 11):
            a = analytic_tmotoc(t, dl, k, method="direct")
            b = analytic_tmotoc(t, dl, k, method="factorized")
            assert abs(a - b) <= 1e-12


def test_unknown_method():
    with pytest.raises(ValueError):
        analytic_tmotoc(build_tables(6, 0.1), 1, 1, method="nope")


@pytest.mark.parametrize("n", [6, 8, 10])
@pytest.mark.parametrize("tau", [np.pi / 56, np.pi / 28, 3 * np.pi / 56])
def test_closed_form_matches_echo(n, tau):
    for dl in (1, 2, 3):
        a = analytic_series(n, tau, dl, 40)
        e = compute_otoc_series(default_request(ModelConfig.integrable(n, tau), "tm", dl, 40))
        assert np.max(np.abs(a.f_values - e.f_values)) <= 1e-8
        # imaginary parts included: the echo value is real only up to round-off
        assert np.max(np.abs(a.f_values.imag - e.f_values.imag)) <= 1e-8


def test_series_packaging():
    s = analytic_series(8, 0.1, 2, 30, stride=5, dense_until=4)
    assert list(s.kicks) == [0, 1, 2, 3, 4, 5, 10, 15, 20, 25, 30]
    assert s.f_values[0] == 1
    assert s.request.config.variant.value == "integrable"
