import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_nash
from qgame.eisert_sim import Entanglement, simulate_payoff
from qgame.errors import DegenerateGame
from qgame.game_core import GParams, PayoffMatrix, nash_equilibria
from qgame.semidet import (
    ORDER,
    Regime,
    S,
    classical_projection,
    closed_form_threshold,
    extended_payoff,
    nash_4x4,
    pareto_4x4,
    primed,
    strategy_product,
    transitions,
)

# Simultaneously exchanging I<->Z and Y<->X for both players
SWAP = [1, 0, 3, 2]


def oracle_table(m, e):
    ent = Entanglement.from_e(e)
    T = np.zeros((4, 4))
    for r, c in itertools.product(ORDER, repeat=2):
        T[r, c] = simulate_payoff(ent, r.su2(), c.su2(), m)[0]
    return T


def test_group_table():
    assert strategy_product(S.I, S.X) == S.X
    assert strategy_product(S.X, S.X) == S.I
    assert strategy_product(S.X, S.Y) == S.Z
    for a, b in itertools.product(ORDER, repeat=2):
        assert strategy_product(a, b) == strategy_product(b, a)
        c = strategy_product(a, b)
        assert strategy_product(c, b) == a


def test_pd_extended_entries(pd):
    g0 = extended_payoff(pd, 0.0)
    assert set(np.unique(g0.table)) <= {3.0, 0.0, 5.0, 1.0}
    assert primed(pd, 1.0) == (1, 5, 0, 3)
    assert np.all(extended_payoff(PayoffMatrix(1, 1, 1, 1), 0.37).table == 1)
    with pytest.raises(ValueError):
        extended_payoff(pd, 1.5)


def test_table_matches_simulation(rng):
    for _ in range(50):
        m = PayoffMatrix(*rng.uniform(-5, 5, 4))
        e = rng.uniform(0, 1)
        assert np.abs(extended_payoff(m, e).table - oracle_table(m, e)).max() < 1e-10


def test_pd_nash_sets(pd):
    # low entanglement doubles the classical NE onto the Y/X corner;
    # above E = 1/3 no pure equilibrium survives
    assert nash_4x4(extended_payoff(pd, 0.0)) == {(S.Y, S.Y), (S.Y, S.X), (S.X, S.Y), (S.X, S.X)}
    assert nash_4x4(extended_payoff(pd, 0.1)) == {(S.Y, S.X), (S.X, S.Y)}
    assert nash_4x4(extended_payoff(pd, 0.9)) == set()
    for e in (0.1, 0.9):
        T = extended_payoff(pd, e).table
        assert {(S(r), S(c)) for r, c in brute_force_nash(T)} == nash_4x4(extended_payoff(pd, e))


def test_constant_game_everything_is_nash():
    g = extended_payoff(PayoffMatrix(2, 2, 2, 2), 0.4)
    assert len(nash_4x4(g)) == 16
    assert len(pareto_4x4(g)) == 16


def test_pd_transitions(pd):
    rep = transitions(pd)
    assert len(rep.thresholds) == 1
    assert rep.thresholds[0] == pytest.approx(1 / 3, abs=1e-9)
    assert rep.intervals[0] == (0.0, rep.thresholds[0])
    assert rep.ne_sets[1] == frozenset()
    assert set(rep.regimes) == {"I", "Z", "Y", "X"}
    assert all(run[2] in Regime for runs in rep.regimes.values() for run in runs)
    d = rep.to_dict()
    assert d["thresholds"] == list(rep.thresholds)


def test_chicken_has_no_transition(chicken):
    rep = transitions(chicken)
    assert rep.thresholds == ()
    assert rep.ne_sets == (frozenset(),)


def test_positive_gab_constant_row_no_threshold():
    # gA = gB = 0 with gAB > 0: a coordination game without any transition
    m = GParams(1, 0, 0, 1).to_payoff()
    assert transitions(m).thresholds == ()


def test_transitions_rejects_constant():
    with pytest.raises(DegenerateGame):
        transitions(PayoffMatrix(1, 1, 1, 1))


def test_closed_form_disagrees_with_sweep(pd):
    # kept for comparison only; for PD it lands outside [0, 1]
    assert closed_form_threshold(pd) == pytest.approx(2.0)


def test_threshold_sets_are_constant_on_intervals(rng):
    for _ in range(20):
        m = PayoffMatrix(*rng.integers(-5, 6, 4).astype(float))
        if m.degenerate:
            continue
        rep = transitions(m)
        for (lo, hi), ne in zip(rep.intervals, rep.ne_sets):
            for e in np.linspace(lo, hi, 7)[1:-1]:
                assert nash_4x4(extended_payoff(m, e)) == ne


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=4, max_size=4), st.floats(0, 1))
def test_swap_symmetry_and_even_count(vals, e):
    T = extended_payoff(PayoffMatrix(*vals), e).table
    assert np.array_equal(T[np.ix_(SWAP, SWAP)], T)
    assert len(nash_4x4(extended_payoff(PayoffMatrix(*vals), e))) % 2 == 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=4, max_size=4))
def test_zero_entanglement_projects_to_classical(vals):
    m = PayoffMatrix(*map(float, vals))
    ne4 = nash_4x4(extended_payoff(m, 0.0), eps=0.0)
    assert classical_projection(ne4) == nash_equilibria(m, eps=0.0)
