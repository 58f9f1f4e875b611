import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_nash
from qgame.errors import BoundaryGame, DegenerateGame
from qgame.game_core import (
    CLASS_TABLE,
    G_TRANSFORM,
    GParams,
    NeStructure,
    PayoffMatrix,
    class_ids,
    classify,
    cube_projection,
    from_gparams,
    mixed_symmetric_equilibrium,
    nash_equilibria,
    normalize,
    pareto_optima,
    robinson_graph,
    to_gparams,
)

payoff = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
games = st.builds(PayoffMatrix, payoff, payoff, payoff, payoff)
# small integers keep every comparison exact
ipay = st.integers(-6, 6).map(float)
int_games = st.builds(PayoffMatrix, ipay, ipay, ipay, ipay)


def test_gparams_examples():
    assert to_gparams(PayoffMatrix(1, 1, 1, 1)).as_array() == pytest.approx([2, 0, 0, 0])
    # direct evaluation of the +-1/2 Hadamard-type product
    for m, want in [((3, 0, 5, 1), (4.5, -1.5, 3.5, -0.5)), ((6, 2, 8, 0), (8, 0, 6, -2))]:
        a, b, c, d = m
        by_hand = (
            (a + b + c + d) / 2,
            (a + b - c - d) / 2,
            (a - b + c - d) / 2,
            (a - b - c + d) / 2,
        )
        assert by_hand == pytest.approx(want)
        assert to_gparams(PayoffMatrix(*m)).as_array() == pytest.approx(want, abs=1e-12)


def test_transform_is_orthogonal_involution():
    assert np.allclose(G_TRANSFORM @ G_TRANSFORM, np.eye(4))
    assert np.allclose(G_TRANSFORM, G_TRANSFORM.T)


def test_normalize_examples():
    g = normalize(GParams(4.5, -1.5, 3.5, -0.5))
    n = math.sqrt(1.5**2 + 3.5**2 + 0.5**2)
    assert g.as_array() == pytest.approx([0, -1.5 / n, 3.5 / n, -0.5 / n])
    assert normalize(GParams(0, 1, 0, 0)).as_array() == pytest.approx([0, 1, 0, 0])
    with pytest.raises(DegenerateGame):
        normalize(GParams(7, 0, 0, 0))


def test_nash_examples(pd, chicken):
    assert nash_equilibria(pd) == {(1, 1)}
    assert pd.payoffs(1, 1) == (1, 1)
    assert nash_equilibria(chicken) == {(0, 1), (1, 0)}
    assert nash_equilibria(PayoffMatrix(1, 1, 1, 1)) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_pareto_examples(pd):
    assert pareto_optima(pd) == {(0, 0)}
    assert pareto_optima(PayoffMatrix(1, 1, 1, 1)) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert pareto_optima(PayoffMatrix(4, 2, 3, 1)) == {(0, 0)}


def test_classify_named_games(pd, chicken):
    k = classify(pd)
    assert k.known_as == "Prisoner's Dilemma"
    assert k.ne_structure == NeStructure.OneDiagonal
    assert k.label == "1.2b"
    assert classify(chicken).known_as == "Chicken"
    assert classify(chicken).ne_structure == NeStructure.Nondiagonal
    assert classify(PayoffMatrix(4, 2, 3, 1)).label == "1.1"


def test_degenerate_and_boundary():
    with pytest.raises(DegenerateGame):
        classify(PayoffMatrix(1, 1, 1, 1))
    # gA + gAB = 0 puts the game on a Nash plane
    m = GParams(0, 1, 0.3, -1).to_payoff()
    with pytest.raises(BoundaryGame) as info:
        classify(m)
    assert len(info.value.adjacent) >= 2


def test_class_areas_sum_to_one():
    assert sum(v[4] for v in CLASS_TABLE.values()) == pytest.approx(1.0)


def test_cube_examples():
    p = cube_projection(GParams(0, 0, 0, -1))
    assert (p.face, p.u, p.v) == ("-gAB", 0.0, 0.0)
    p = cube_projection(GParams(0, -0.3886, 0.9066, -0.1295))
    assert p.face == "+gB"
    assert p.u == pytest.approx(-0.3886 / 0.9066)
    assert p.v == pytest.approx(-0.1295 / 0.9066)
    assert p.u == pytest.approx(-0.4285, abs=2e-4)
    s = 1 / math.sqrt(2)
    p = cube_projection(GParams(0, s, s, 0))
    assert p.on_edge and set(p.edge) == {"+gA", "+gB"}


def test_robinson_pd(pd):
    g = robinson_graph(pd)
    assert g.ne_nodes == {(1, 1)}
    assert g.po_nodes == {(0, 0)}
    dot = g.to_dot()
    assert dot.startswith("digraph") and "doublecircle" in dot


def test_robinson_constant():
    g = robinson_graph(PayoffMatrix(1, 1, 1, 1))
    assert len(g.ne_nodes) == 4 and len(g.po_nodes) == 4
    assert all((t, s) in g.nash_arrows for s, t in g.nash_arrows)


def test_robinson_ne_at_four_four():
    # in this package's row-major convention the game with NE payoff (4,4)
    # is (4,5,1,0); (4,1,5,0) is its transpose with NE payoffs (1,5), (5,1)
    g = robinson_graph(PayoffMatrix(4, 5, 1, 0))
    assert [g.nodes[p] for p in g.ne_nodes] == [(4.0, 4.0)]
    lit = robinson_graph(PayoffMatrix(4, 1, 5, 0))
    assert sorted(lit.nodes[p] for p in lit.ne_nodes) == [(1.0, 5.0), (5.0, 1.0)]


def test_json_roundtrip(pd):
    assert PayoffMatrix.from_json(pd.to_json()) == pd
    assert json.loads(pd.to_json())["payoff"] == [[3, 0], [5, 1]]
    assert PayoffMatrix.parse("3,0,5,1") == pd


def test_mixed_equilibrium_chicken(chicken):
    q, pay = mixed_symmetric_equilibrium(chicken)
    # opponent indifferent: q*a + (1-q)*b == q*c + (1-q)*d
    a, b, c, d = chicken.values()
    assert q * a + (1 - q) * b == pytest.approx(q * c + (1 - q) * d)
    assert mixed_symmetric_equilibrium(PayoffMatrix(3, 0, 5, 1)) is None


@settings(max_examples=300, deadline=None)
@given(int_games)
def test_nash_matches_brute_force(m):
    assert nash_equilibria(m, eps=0.0) == brute_force_nash(m.matrix())


@settings(max_examples=200, deadline=None)
@given(games, st.floats(0.1, 5), st.floats(-5, 5))
def test_affine_invariance(m, alpha, beta):
    if m.spread < 1e-3:
        return
    try:
        k = classify(m)
    except BoundaryGame:
        return
    assert classify(m.affine(alpha, beta)).class_id == k.class_id


@settings(max_examples=200, deadline=None)
@given(games)
def test_relabel_symmetry(m):
    if m.spread < 1e-3:
        return
    flip = {(i, j): (1 - i, 1 - j) for i, j in itertools.product((0, 1), repeat=2)}
    eps = m.tolerance()
    assert nash_equilibria(m.relabel(), eps) == {flip[p] for p in nash_equilibria(m, eps)}
    try:
        k = classify(m)
    except BoundaryGame:
        return
    assert classify(m.relabel()).class_id == k.class_id


@settings(max_examples=200, deadline=None)
@given(games)
def test_ne_po_duality(m):
    assert pareto_optima(m, 0.0) == nash_equilibria(m.transpose(), 0.0)


@settings(max_examples=200, deadline=None)
@given(int_games, st.integers(-5, 5), st.integers(-5, 5))
def test_ne_ignores_gb_and_po_ignores_ga(m, dgb, dga):
    g = to_gparams(m)
    nb = GParams(g.g0, g.gA, g.gB + dgb, g.gAB).to_payoff()
    na = GParams(g.g0, g.gA + dga, g.gB, g.gAB).to_payoff()
    assert nash_equilibria(nb, 0.0) == nash_equilibria(m, 0.0)
    assert pareto_optima(na, 0.0) == pareto_optima(m, 0.0)


@settings(max_examples=200, deadline=None)
@given(games)
def test_gparams_roundtrip(m):
    back = from_gparams(to_gparams(m))
    assert back.values() == pytest.approx(m.values(), abs=1e-12)


def test_vectorized_ids_agree_with_scalar(rng):
    v = rng.normal(size=(500, 3))
    ids = class_ids(*v.T)
    for row, k in zip(v, ids):
        m = GParams(0, *row).to_payoff()
        try:
            assert classify(m).class_id == k
        except BoundaryGame:
            pass
    assert set(ids) <= set(range(1, 13))
