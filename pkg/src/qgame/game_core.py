"""Classical symmetric 2x2 games.

A game is stored as A's payoffs ``(a, b, c, d)`` laid out as

    [[a, b],
     [c, d]]

with the row as A's own strategy and the column as the opponent's.  B's
matrix is the transpose.  Most decisions are taken in G-parameter space,
where the Nash conditions only involve (gA, gAB) and the Pareto conditions
only involve (gB, gAB).
"""

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryGame, DegenerateGame

POSITIONS = ((0, 0), (0, 1), (1, 0), (1, 1))

# Symmetric and orthogonal, hence its own inverse.
G_TRANSFORM = 0.5 * np.array(
    [
        [1, 1, 1, 1],
        [1, 1, -1, -1],
        [1, -1, 1, -1],
        [1, -1, -1, 1],
    ],
    dtype=float,
)

REL_TOL = 1e-9


@dataclass(frozen=True)
class PayoffMatrix:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"payoff {name} is not finite: {v}")

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(float(a), float(b), float(c), float(d))

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text) if isinstance(text, str) else text
        return cls.from_rows(obj["payoff"])

    @classmethod
    def parse(cls, text):
        """Parse the ``a,b,c,d`` command line form."""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 4:
            raise ValueError(f"expected four comma separated payoffs, got {text!r}")
        return cls(*(float(p) for p in parts))

    def to_json(self):
        return json.dumps({"payoff": [[self.a, self.b], [self.c, self.d]]})

    def values(self):
        return np.array([self.a, self.b, self.c, self.d], dtype=float)

    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    def transpose(self):
        return PayoffMatrix(self.a, self.c, self.b, self.d)

    def relabel(self):
        """Swap the strategy labels 0 and 1 for both players."""
        return PayoffMatrix(self.d, self.c, self.b, self.a)

    def affine(self, alpha, beta):
        return PayoffMatrix(*(alpha * self.values() + beta))

    @property
    def degenerate(self):
        return self.a == self.b == self.c == self.d

    @property
    def spread(self):
        v = self.values()
        return float(v.max() - v.min())

    def tolerance(self):
        return REL_TOL * self.spread

    def payoff_a(self, i, j):
        return float(self.matrix()[i, j])

    def payoff_b(self, i, j):
        return float(self.matrix()[j, i])

    def payoffs(self, i, j):
        return self.payoff_a(i, j), self.payoff_b(i, j)


@dataclass(frozen=True)
class GParams:
    g0: float
    gA: float
    gB: float
    gAB: float

    def as_array(self):
        return np.array([self.g0, self.gA, self.gB, self.gAB], dtype=float)

    def vector(self):
        """The scale carrying part (gA, gB, gAB)."""
        return np.array([self.gA, self.gB, self.gAB], dtype=float)

    def to_payoff(self):
        return PayoffMatrix(*(G_TRANSFORM @ self.as_array()))


def to_gparams(m):
    return GParams(*(G_TRANSFORM @ m.values()))


def from_gparams(g):
    return g.to_payoff()


def normalize(g):
    v = g.vector()
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise DegenerateGame("constant game has no normalized representative")
    return GParams(0.0, *(v / n))


class NeStructure(enum.Enum):
    OneDiagonal = "OneDiagonal"
    BothDiagonal = "BothDiagonal"
    Nondiagonal = "Nondiagonal"


class PoStructure(enum.Enum):
    SameDiagonal = "SameDiagonal"
    OtherDiagonal = "OtherDiagonal"
    Nondiagonal = "Nondiagonal"
    BothDiagonal = "BothDiagonal"


class PayoffOrder(enum.Enum):
    NeAbovePo = "NeAbovePo"
    NeBelowPo = "NeBelowPo"
    NotApplicable = "NotApplicable"


N, P, F = NeStructure, PoStructure, PayoffOrder

# (label, ne, po, order, area on the sphere)
CLASS_TABLE = {
    1: ("1.1", N.OneDiagonal, P.SameDiagonal, F.NotApplicable, 1 / 6),
    2: ("1.2a", N.OneDiagonal, P.OtherDiagonal, F.NeAbovePo, 1 / 12),
    3: ("1.2b", N.OneDiagonal, P.OtherDiagonal, F.NeBelowPo, 1 / 12),
    4: ("1.3a", N.OneDiagonal, P.Nondiagonal, F.NeAbovePo, 1 / 24),
    5: ("1.3b", N.OneDiagonal, P.Nondiagonal, F.NeBelowPo, 1 / 24),
    6: ("1.4", N.OneDiagonal, P.BothDiagonal, F.NotApplicable, 1 / 12),
    7: ("2.1a", N.BothDiagonal, P.SameDiagonal, F.NeBelowPo, 1 / 24),
    8: ("2.1b", N.BothDiagonal, P.SameDiagonal, F.NeAbovePo, 1 / 24),
    9: ("2.2", N.BothDiagonal, P.BothDiagonal, F.NotApplicable, 1 / 6),
    10: ("3.1a", N.Nondiagonal, P.OtherDiagonal, F.NeAbovePo, 1 / 24),
    11: ("3.1b", N.Nondiagonal, P.OtherDiagonal, F.NeBelowPo, 1 / 24),
    12: ("3.2", N.Nondiagonal, P.Nondiagonal, F.NotApplicable, 1 / 6),
}

CLASS_NOTES = {
    3: "Prisoner's Dilemma",
    9: "Pareto Coordination",
    11: "Chicken",
}


@dataclass(frozen=True)
class GameClass:
    ne_structure: NeStructure
    po_structure: PoStructure
    payoff_order_flag: PayoffOrder
    class_id: int

    @classmethod
    def from_id(cls, class_id):
        _, ne, po, order, _ = CLASS_TABLE[class_id]
        return cls(ne, po, order, class_id)

    @property
    def label(self):
        return CLASS_TABLE[self.class_id][0]

    @property
    def area(self):
        return CLASS_TABLE[self.class_id][4]

    @property
    def known_as(self):
        return CLASS_NOTES.get(self.class_id)

    def to_dict(self):
        return {
            "class_id": self.class_id,
            "label": self.label,
            "ne_structure": self.ne_structure.value,
            "po_structure": self.po_structure.value,
            "payoff_order": self.payoff_order_flag.value,
            "known_as": self.known_as,
        }


def _positions_from(gX, gAB, eps):
    out = set()
    for i, j in POSITIONS:
        si, sj = (-1) ** i, (-1) ** j
        if si * (gX + sj * gAB) >= -eps and sj * (gX + si * gAB) >= -eps:
            out.add((i, j))
    return out


def nash_equilibria(m, eps=None):
    g = to_gparams(m)
    eps = m.tolerance() if eps is None else eps
    return _positions_from(g.gA, g.gAB, eps)


def pareto_optima(m, eps=None):
    return nash_equilibria(m.transpose(), eps)


def class_ids(gA, gB, gAB):
    """Vectorized class ids for arrays of (gA, gB, gAB).

    Points on a plane are binned by the non-strict side of each test, so
    every sample receives exactly one id.  ``classify`` is the checked
    scalar entry point.
    """
    gA, gB, gAB = (np.asarray(x, dtype=float) for x in (gA, gB, gAB))
    ne_off = gAB < -np.abs(gA)
    ne_both = ~ne_off & (gAB > np.abs(gA))
    ne_zero = gA >= 0  # which diagonal when there is only one
    po_off = gAB < -np.abs(gB)
    po_both = ~po_off & (gAB > np.abs(gB))
    po_zero = gB >= 0
    same_sign = gA * gB >= 0
    # NE and PO on a single diagonal each: same place, or the 1.2 split
    ne_up = np.where(ne_zero, gA + gB, -(gA + gB)) >= 0

    ids = np.zeros(gA.shape, dtype=int)
    one = ~ne_off & ~ne_both
    po_one = ~po_off & ~po_both
    ids[one & po_one & (ne_zero == po_zero)] = 1
    ids[one & po_one & (ne_zero != po_zero) & ne_up] = 2
    ids[one & po_one & (ne_zero != po_zero) & ~ne_up] = 3
    ids[one & po_off & same_sign] = 4
    ids[one & po_off & ~same_sign] = 5
    ids[one & po_both] = 6
    ids[ne_both & po_one & ~same_sign] = 7
    ids[ne_both & po_one & same_sign] = 8
    ids[ne_both & ~po_one] = 9
    ids[ne_off & po_one & ~same_sign] = 10
    ids[ne_off & po_one & same_sign] = 11
    ids[ne_off & ~po_one] = 12
    return ids


def _adjacent_classes(v, scale):
    rng = np.random.default_rng(12345)
    pert = v + scale * 1e-6 * rng.normal(size=(256, 3))
    return set(int(k) for k in class_ids(*pert.T))


def classify(m):
    if m.degenerate:
        raise DegenerateGame("constant game cannot be classified")
    g = to_gparams(m)
    eps = m.tolerance()
    gA, gB, gAB = g.gA, g.gB, g.gAB
    planes = [gA + gAB, gA - gAB, gB + gAB, gB - gAB]
    k = int(class_ids(gA, gB, gAB))
    if k in (2, 3):
        planes.append(gA + gB)
    if min(abs(p) for p in planes) < eps:
        v = g.vector()
        adj = _adjacent_classes(v, float(np.linalg.norm(v)))
        raise BoundaryGame(
            f"game {m} lies on a classification plane", adjacent=adj
        )
    return GameClass.from_id(k)


@dataclass(frozen=True)
class CubePoint:
    face: str
    u: float
    v: float
    edge: tuple = ()

    @property
    def on_edge(self):
        return bool(self.edge)


_AXES = ("gA", "gB", "gAB")
_FACE_COORDS = {0: (1, 2), 1: (0, 2), 2: (0, 1)}


def cube_projection(g, tol=1e-12):
    v = g.vector()
    top = float(np.max(np.abs(v)))
    if top == 0.0:
        raise DegenerateGame("constant game has no cube projection")
    w = v / top
    dom = [k for k in range(3) if abs(abs(w[k]) - 1.0) <= tol]
    names = tuple(("+" if w[k] > 0 else "-") + _AXES[k] for k in dom)
    k = dom[0]
    i, j = _FACE_COORDS[k]
    return CubePoint(names[0], float(w[i]), float(w[j]), names if len(dom) > 1 else ())


@dataclass(frozen=True)
class RobinsonGraph:
    nodes: dict
    nash_arrows: frozenset
    pareto_arrows: frozenset
    ne_nodes: frozenset
    po_nodes: frozenset

    def to_dot(self, name="robinson"):
        lines = [f"digraph {name} {{"]
        for pos, (pa, pb) in sorted(self.nodes.items()):
            shape = "doublecircle" if pos in self.ne_nodes else "circle"
            style = ', style=filled, fillcolor="#dddddd"' if pos in self.po_nodes else ""
            lines.append(
                f'  "{pos[0]}{pos[1]}" [label="{pos[0]}{pos[1]}\\n({pa:g},{pb:g})", '
                f'shape={shape}, pos="{pb:g},{pa:g}!"{style}];'
            )
        for src, dst in sorted(self.nash_arrows):
            lines.append(f'  "{src[0]}{src[1]}" -> "{dst[0]}{dst[1]}" [style=solid];')
        for src, dst in sorted(self.pareto_arrows):
            lines.append(
                f'  "{src[0]}{src[1]}" -> "{dst[0]}{dst[1]}" [style=dashed, arrowhead=empty];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def _arrows(m, eps, own):
    """Edges for A's moves (changing i) and B's moves (changing j).

    With ``own`` the arrow follows the mover's payoff, otherwise the
    opponent's.
    """
    out = set()
    for j in (0, 1):
        p, q = (0, j), (1, j)
        f = m.payoff_a if own else m.payoff_b
        out |= _orient(p, q, f(*p), f(*q), eps)
    for i in (0, 1):
        p, q = (i, 0), (i, 1)
        f = m.payoff_b if own else m.payoff_a
        out |= _orient(p, q, f(*p), f(*q), eps)
    return out


def _orient(p, q, vp, vq, eps):
    if abs(vp - vq) <= eps:
        return {(p, q), (q, p)}
    return {(p, q)} if vq > vp else {(q, p)}


def _sinks(arrows):
    out = set()
    for pos in POSITIONS:
        leaving = {(s, t) for s, t in arrows if s == pos}
        if all((t, s) in arrows for s, t in leaving):
            out.add(pos)
    return frozenset(out)


def robinson_graph(m):
    eps = m.tolerance()
    nodes = {pos: m.payoffs(*pos) for pos in POSITIONS}
    nash = frozenset(_arrows(m, eps, own=True))
    pareto = frozenset(_arrows(m, eps, own=False))
    return RobinsonGraph(nodes, nash, pareto, _sinks(nash), _sinks(pareto))


def mixed_symmetric_equilibrium(m):
    """Symmetric mixed profile making the opponent indifferent.

    Returns ``(q, payoff)`` where ``q`` is the weight on strategy 0, or
    ``None`` when no interior point exists.
    """
    den = m.a - m.b - m.c + m.d
    if den == 0:
        return None
    q = (m.d - m.b) / den
    if not 0.0 < q < 1.0:
        return None
    pay = q * q * m.a + q * (1 - q) * (m.b + m.c) + (1 - q) ** 2 * m.d
    return q, pay
