import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ultraoregon.automaton import (CAState, Custom, Pacemaker, PreconditionError, SingleRing,
                                   Spiral, Target, ca_run, ca_step_full, ca_step_simple,
                                   resolve_spiral, seed_pattern, tsu_step, tsu_step_sixpoint,
                                   w_shift)
from ultraoregon.grid import PERIODIC, Fixed
from ultraoregon.verify import check_rule_equivalence, check_shift_chain, table_rows

binary = arrays(np.int64, (6, 7), elements=st.integers(0, 1))


@pytest.mark.parametrize("ma,mb,want", table_rows())
def test_table_columns(ma, mb, want):
    s = CAState([[mb]], [[ma]], alpha=0, beta=0)
    assert ca_step_simple(s)[0, 0] == want
    assert ca_step_full(s)[0, 0] == want
    assert tsu_step([[ma]], [[mb]])[0, 0] == want


def test_shift_values():
    assert set(np.unique(w_shift([[-1, 0], [0, -1]], -1))) == {0, 1}
    assert np.array_equal(w_shift([[3, -2]], 0), [[3, -2]])


def test_quiescent_and_all_lit():
    z = np.zeros((5, 5), dtype=np.int64)
    assert not ca_step_full(CAState(z, z)).any()
    s = CAState(z, z + 1)
    assert np.all(ca_step_full(s, b=PERIODIC) == 1)


def test_exhaustive_and_random_equivalence():
    for c in check_rule_equivalence():
        assert c.passed, c


def test_shift_chain():
    assert check_shift_chain().passed


@settings(max_examples=100, deadline=None)
@given(binary, binary, st.integers(0, 2), st.integers(0, 2))
def test_full_equals_simple(prev, curr, a, b):
    s = CAState(prev, curr, alpha=a, beta=b)
    for bnd in (Fixed(0), PERIODIC):
        assert np.array_equal(ca_step_full(s, b=bnd), ca_step_simple(s, b=bnd))


@settings(max_examples=100, deadline=None)
@given(binary, binary)
def test_tsu_forms_agree(prev, curr):
    assert np.array_equal(tsu_step(curr, prev), tsu_step_sixpoint(curr, prev))
    assert np.array_equal(tsu_step(curr, prev), ca_step_simple(CAState(prev, curr)))


def test_preconditions():
    z = np.zeros((3, 3), dtype=np.int64)
    with pytest.raises(PreconditionError):
        CAState(z, z + 2)
    with pytest.raises(PreconditionError):
        tsu_step(z - 1, z)
    with pytest.raises(PreconditionError):
        ca_step_simple(CAState(z, z), F=2)
    with pytest.raises(ValueError):
        CAState(z, np.zeros((2, 2)))
    with pytest.raises(ValueError):
        ca_run(CAState(z, z), "bogus", 1)


def test_run_echoes_seed_and_matches_tsu():
    s = seed_pattern(SingleRing(), 21, 21)
    assert len(ca_run(s, "simple", 0)) == 1
    assert np.array_equal(ca_run(s, "simple", 0)[0], s.w_curr)
    rng = np.random.default_rng(4)
    seed = CAState(rng.integers(0, 2, (20, 20)), rng.integers(0, 2, (20, 20)))
    a = ca_run(seed, "simple", 50)
    b = ca_run(seed, "tsu", 50)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_seeds():
    s = seed_pattern(SingleRing(), 21, 21)
    assert s.w_curr.sum() == 1 and s.w_curr[10, 10] == 1 and not s.w_prev.any()
    with pytest.raises(ValueError):
        seed_pattern(SingleRing(), 21, 21, steps=11)
    t = seed_pattern(Target(), 41, 41, steps=16)
    assert t.pacemaker == Pacemaker(20, 20, (1, 1, 0, 0)) and t.w_curr[20, 20] == 1
    z = np.zeros((4, 4), dtype=np.int64)
    assert seed_pattern(Custom(z, z), 4, 4).w_curr.shape == (4, 4)
    with pytest.raises(TypeError):
        seed_pattern(object(), 4, 4)


def test_pacemaker_overrides():
    frames = ca_run(seed_pattern(Target(), 41, 41), "simple", 12)
    assert [int(f[20, 20]) for f in frames] == [1, 1, 0, 0] * 3 + [1]


def test_spiral_search_switch(monkeypatch):
    requested = Spiral()
    monkeypatch.setenv("OREGONATOR_SEED_SEARCH", "off")
    assert resolve_spiral(requested, 81, 81) == requested
    monkeypatch.setenv("OREGONATOR_SEED_SEARCH", "on")
    found = resolve_spiral(requested, 81, 81)
    assert found.offset == (1, 0)
    s = seed_pattern(requested, 81, 81)
    assert s.alpha == 1 and s.beta == 1
    assert s.w_curr.sum() == 21 and np.array_equal(np.roll(s.w_curr, 1, axis=0), s.w_prev)
