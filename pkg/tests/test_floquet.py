import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from floq_otoc import ConfigError, ModelConfig
from floq_otoc import _kernels as K
from floq_otoc.floquet import Direction, FloquetMap, _PhaseTables, apply_floquet, evolve_n_kicks
from floq_otoc.spinchain import InitialState, build_initial_state


def haar(n, seed=0):
    return build_initial_state(InitialState.haar(seed), n)


@pytest.mark.parametrize("variant", ["integrable", "nonintegrable"])
@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_one_kick_matches_dense(variant, n):
    cfg = ModelConfig.integrable(n, 0.33) if variant == "integrable" else ModelConfig.nonintegrable(n, 0.33)
    s = haar(n, n)
    u = oracles.floquet(n, 0.33, h_x=cfg.h_x)
    got = apply_floquet(s, FloquetMap(cfg)).amplitudes
    np.testing.assert_allclose(got, u @ s.amplitudes, atol=1e-13)


def test_z_kick_acts_first():
    # one kick on |up..up>: the z kick only adds a global phase, the x kick then spreads
    n, tau = 4, 0.2
    cfg = ModelConfig.integrable(n, tau)
    s = build_initial_state("all_up", n)
    got = apply_floquet(s, FloquetMap(cfg)).amplitudes
    want = oracles.floquet(n, tau) @ s.amplitudes
    np.testing.assert_allclose(got, want, atol=1e-14)


@settings(max_examples=20, deadline=None)
@given(n=st.integers(2, 9), kicks=st.integers(0, 30), tau=st.floats(0.0, 3.0), seed=st.integers(0, 1000))
def test_inverse_undoes_forward(n, kicks, tau, seed):
    cfg = ModelConfig.nonintegrable(n, tau)
    s = haar(n, seed)
    fwd = FloquetMap(cfg)
    back = evolve_n_kicks(evolve_n_kicks(s, fwd, kicks), fwd.inverse(), kicks)
    np.testing.assert_allclose(back.amplitudes, s.amplitudes, atol=1e-12)


def test_inverse_matches_dagger():
    n = 5
    cfg = ModelConfig.nonintegrable(n, 0.7)
    s = haar(n, 1)
    u = oracles.floquet(n, 0.7, h_x=1.0)
    got = apply_floquet(s, FloquetMap(cfg, Direction.INVERSE)).amplitudes
    np.testing.assert_allclose(got, u.conj().T @ s.amplitudes, atol=1e-13)


def test_norm_drift_over_thousand_kicks():
    s = haar(10, 4)
    out = evolve_n_kicks(s, FloquetMap(ModelConfig.nonintegrable(10, np.pi / 56)), 1000)
    assert abs(out.norm() - 1) <= 1e-12


def test_zero_tau_is_identity():
    s = haar(6, 2)
    out = evolve_n_kicks(s, FloquetMap(ModelConfig.nonintegrable(6, 0.0)), 5)
    np.testing.assert_allclose(out.amplitudes, s.amplitudes, atol=1e-14)


def test_negative_kicks_rejected():
    with pytest.raises(ConfigError):
        evolve_n_kicks(haar(4), FloquetMap(ModelConfig.integrable(4, 0.1)), -1)


def test_dimension_mismatch():
    with pytest.raises(ConfigError):
        apply_floquet(haar(4), FloquetMap(ModelConfig.integrable(5, 0.1)))


def test_evolution_does_not_mutate_input():
    s = haar(6)
    before = s.amplitudes.copy()
    evolve_n_kicks(s, FloquetMap(ModelConfig.integrable(6, 0.3)), 3)
    assert np.array_equal(s.amplitudes, before)


def test_tabulated_and_on_the_fly_paths_agree(monkeypatch):
    cfg = ModelConfig.nonintegrable(8, 0.29)
    a = haar(8, 5).amplitudes.copy()
    b = a.copy()
    table = _PhaseTables(cfg)
    monkeypatch.setattr(K, "TABLE_LIMIT", 1)
    fly = _PhaseTables(cfg)
    assert table.tabulated and not fly.tabulated
    for _ in range(10):
        table.forward(a)
        fly.forward(b)
    assert np.array_equal(a, b)
    table.inverse(a)
    fly.inverse(b)
    assert np.array_equal(a, b)
