import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultraoregon.grid import GuardError, INT_GUARD, Fixed
from ultraoregon.tropical import OregonatorParams, trop_ode_step
from ultraoregon.ultradiscrete import (INF, UDParams, UDState, saturation_threshold,
                                       tropical_log_image, ud_limit_probe, ud_run_single,
                                       ud_scalar_full, ud_step_einf, ud_step_full, ud_step_single)
from ultraoregon.verify import random_ud_states

CELL = UDParams(A=0, F=1, Q=-1, E=INF, alpha=0, beta=0)


def zeros(shape=(3, 3)):
    return np.zeros(shape, dtype=np.int64)


def test_scalar_example_infinite_E():
    s = ud_step_full(UDState.of(zeros(), zeros()), CELL)
    assert np.all(s.U == -1) and np.all(s.V == 0)
    e = ud_step_einf(UDState.of(zeros(), zeros()), CELL)
    assert np.array_equal(e.U, s.U) and np.array_equal(e.V, s.V)


def test_single_examples():
    assert np.all(ud_step_single(zeros(), zeros(), CELL) == -1)
    assert np.all(ud_step_single(zeros(), zeros() - 1, CELL) == 0)


def test_uniform_E_zero_against_scalar():
    for U, V, A, F, Q in [(0, 0, 0, 1, -1), (2, -1, 1, 3, 2), (-3, 4, -2, -1, 0)]:
        p = UDParams(A=A, F=F, Q=Q, E=0, alpha=1, beta=1)
        s = ud_step_full(UDState.of(zeros() + U, zeros() + V), p)
        want = ud_scalar_full(U, V, A, F, Q, 0)
        assert np.all(s.U == want[0]) and np.all(s.V == want[1])


def test_saturation_equality_and_tightness():
    for s, p, bound in random_ud_states(count=100):
        pe = UDParams(A=p.A, F=p.F, Q=p.Q, E=saturation_threshold(bound, p),
                      alpha=p.alpha, beta=p.beta)
        a, b = ud_step_full(s, pe), ud_step_einf(s, p)
        assert np.array_equal(a.U, b.U) and np.array_equal(a.V, b.V)
    # below the threshold the finite map can differ
    differs = False
    for s, p, bound in random_ud_states(count=100, seed=99):
        pe = UDParams(A=p.A, F=p.F, Q=p.Q, E=0, alpha=p.alpha, beta=p.beta)
        a, b = ud_step_full(s, pe), ud_step_einf(s, p)
        if not (np.array_equal(a.U, b.U) and np.array_equal(a.V, b.V)):
            differs = True
            break
    assert differs


def test_limit_probe_max_identity():
    for lam in (1.0, 0.1, 1e-2, 1e-3):
        assert ud_limit_probe([1, 1], "max", lam) == pytest.approx(lam * math.log(2), abs=1e-12)
    assert ud_limit_probe([2, 0], "max", 0.1) == pytest.approx(0.1 * math.log1p(math.exp(-20)), rel=1e-6)


def test_log_image_matches_direct_tropical_step():
    lam = 0.5
    U, V, A, F, Q, E = 0.3, -0.4, 0.2, 0.1, -0.5, 0.7
    p = OregonatorParams(a=math.exp(A / lam), f=math.exp(F / lam), q=math.exp(Q / lam))
    # -E is the exponent of 1/eps
    u, v = trop_ode_step(math.exp(U / lam), math.exp(V / lam), p, math.exp(E / lam))
    tu, tv = tropical_log_image(U, V, A, F, Q, E, lam)
    assert tu == pytest.approx(lam * math.log(u), abs=1e-12)
    assert tv == pytest.approx(lam * math.log(v), abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(st.tuples(*[st.integers(-4, 4)] * 5), st.one_of(st.just(INF), st.integers(0, 8)))
def test_limit_gap_decreases(ints, E):
    gaps = [ud_limit_probe((*ints, E), "scheme", lam) for lam in (1e-1, 1e-2, 1e-3)]
    assert gaps[0] + 1e-15 >= gaps[1] and gaps[1] + 1e-15 >= gaps[2]
    assert gaps[-1] <= 0.05


def test_probe_rejects_bad_input():
    with pytest.raises(ValueError):
        ud_limit_probe([1], "max", 0.0)
    with pytest.raises(ValueError):
        ud_limit_probe([1], "min", 0.1)


def test_params_and_guard():
    with pytest.raises(ValueError):
        UDParams(F=0.5)
    with pytest.raises(ValueError):
        UDParams(E=-INF)
    with pytest.raises(ValueError):
        UDParams(alpha=-1)
    with pytest.raises(ValueError):
        UDParams(F=-1, Q=1).require_ca_regime()
    UDParams().require_ca_regime()
    from ultraoregon.automaton import w_shift
    with pytest.raises(GuardError):
        w_shift(zeros() + INT_GUARD, -INT_GUARD)
    with pytest.raises(ValueError):
        UDState.of(zeros((2, 2)), zeros((3, 3)))
    with pytest.raises(ValueError):
        ud_step_single(zeros((2, 2)), zeros((3, 3)), CELL)


def test_single_equation_is_einf_map_with_lagged_v(rng):
    p = UDParams(F=2, Q=1, alpha=1, beta=1)
    U0 = rng.integers(-3, 4, (6, 6))
    U1 = rng.integers(-3, 4, (6, 6))
    layers = ud_run_single(U0, U1, p, 3, Fixed(0))
    # V_n = M_beta(U_{n-1}) turns the two-component map into the single equation
    from ultraoregon.grid import max5
    s = ud_step_einf(UDState.of(layers[1], max5(layers[0], 1, Fixed(0))), p, Fixed(0))
    assert np.array_equal(s.U, layers[2])
