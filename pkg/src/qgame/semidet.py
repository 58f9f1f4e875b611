"""The extended 4x4 game over the semideterministic strategies.

The four strategies I, Z = i sz, Y = -i sy and X = i sx form a Klein
four-group up to phase.  Against each other they give an ordinary 4x4
bimatrix game whose entries are affine in E.
"""

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .eisert_sim import Su2Strategy
from .errors import DegenerateGame
from .game_core import REL_TOL


class SemidetStrategy(enum.IntEnum):
    I = 0
    Z = 1
    Y = 2
    X = 3

    def su2(self):
        return _SU2[self]

    def matrix(self):
        return self.su2().matrix()


_SU2 = {
    SemidetStrategy.I: Su2Strategy(1.0, 0.0, 0.0, 0.0),
    SemidetStrategy.Z: Su2Strategy(0.0, 1.0, 0.0, 0.0),
    SemidetStrategy.Y: Su2Strategy(0.0, 0.0, -1.0, 0.0),
    SemidetStrategy.X: Su2Strategy(0.0, 0.0, 0.0, 1.0),
}

S = SemidetStrategy
ORDER = (S.I, S.Z, S.Y, S.X)


def _equal_up_to_phase(u, v, tol=1e-12):
    k = np.argmax(np.abs(v))
    idx = np.unravel_index(k, v.shape)
    if abs(u[idx]) < tol:
        return False
    phase = u[idx] / v[idx]
    return abs(abs(phase) - 1.0) < tol and np.allclose(u, phase * v, atol=tol)


def strategy_product(s1, s2):
    prod = s1.matrix().conj().T @ s2.matrix()
    for s in ORDER:
        if _equal_up_to_phase(prod, s.matrix()):
            return s
    raise ArithmeticError("product left the group")


@dataclass(frozen=True)
class ExtendedGame:
    table: np.ndarray
    e: float
    source: object

    def payoff_a(self, r, c):
        return float(self.table[r, c])

    def payoff_b(self, r, c):
        return float(self.table[c, r])

    def to_csv_rows(self):
        header = [""] + [s.name for s in ORDER]
        rows = [header]
        for r in ORDER:
            rows.append([r.name] + [float(self.table[r, c]) for c in ORDER])
        return rows


def primed(m, e):
    """(a', b', c', d'), each mixing a value with its diagonal partner."""
    a = (1 - e) * m.a + e * m.d
    b = (1 - e) * m.b + e * m.c
    c = (1 - e) * m.c + e * m.b
    d = (1 - e) * m.d + e * m.a
    return a, b, c, d


def extended_table(m, e):
    a, b, c, d = m.a, m.b, m.c, m.d
    a1, b1, c1, d1 = primed(m, e)
    return np.array(
        [
            [a, a1, b1, b],
            [a1, a, b, b1],
            [c1, c, d, d1],
            [c, c1, d1, d],
        ],
        dtype=float,
    )


def extended_payoff(m, e):
    if not 0.0 <= e <= 1.0:
        raise ValueError(f"E must lie in [0, 1], got {e}")
    return ExtendedGame(extended_table(m, e), float(e), m)


def _tolerance(table):
    return REL_TOL * float(table.max() - table.min())


def nash_table(T, eps=None):
    """Pure equilibria of the symmetric bimatrix game with A-table ``T``.

    B's payoff at (r, c) is T[c, r], so both conditions reduce to column
    maxima of T.
    """
    eps = _tolerance(T) if eps is None else eps
    colmax = T.max(axis=0)
    best = T >= colmax[None, :] - eps
    return {(r, c) for r in range(4) for c in range(4) if best[r, c] and best[c, r]}


def nash_4x4(g, eps=None):
    return {(S(r), S(c)) for r, c in nash_table(g.table, eps)}


def pareto_4x4(g, eps=None):
    return {(S(r), S(c)) for r, c in nash_table(g.table.T, eps)}


def classical_projection(positions):
    """Map I, Z to classical strategy 0 and Y, X to 1."""
    return {(int(r) // 2, int(c) // 2) for r, c in positions}


class Regime(enum.Enum):
    Low = "Low"
    Medium = "Medium"
    High = "High"


@dataclass(frozen=True)
class RegimeReport:
    thresholds: tuple
    ne_sets: tuple
    intervals: tuple
    regimes: dict

    def to_dict(self):
        return {
            "thresholds": list(self.thresholds),
            "intervals": [list(iv) for iv in self.intervals],
            "ne_sets": [
                sorted([r.name, c.name] for r, c in ne) for ne in self.ne_sets
            ],
            "regimes": {
                k: [[lo, hi, reg.value] for lo, hi, reg in v]
                for k, v in self.regimes.items()
            },
        }


def _affine_entries(m):
    t0 = extended_table(m, 0.0)
    t1 = extended_table(m, 1.0)
    return t0.reshape(-1), (t1 - t0).reshape(-1)


def crossing_points(m):
    """All E in (0, 1) where two table entries meet."""
    v0, slope = _affine_entries(m)
    found = []
    for i, j in itertools.combinations(range(16), 2):
        ds = slope[i] - slope[j]
        if ds == 0.0:
            continue
        e = float((v0[j] - v0[i]) / ds)
        if 0.0 < e < 1.0:
            found.append(e)
    out = []
    for e in sorted(found):
        if not out or e - out[-1] > 1e-12:
            out.append(e)
    return out


PRIMED_MASK = np.array(
    [
        [0, 1, 1, 0],
        [1, 0, 0, 1],
        [1, 0, 0, 1],
        [0, 1, 1, 0],
    ],
    dtype=bool,
)


def _lattice_regimes(m, cuts):
    """Regime labels for A's payoff lattice in each column of the table.

    Low while an unprimed entry still tops the column, Medium when the
    primed descendant of the classical maximum does, High when the primed
    descendant of the classical minimum does.
    """
    labels = {}
    edges = [0.0] + list(cuts) + [1.0]
    T0 = extended_table(m, 0.0)
    for c in ORDER:
        runs = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            T = extended_table(m, 0.5 * (lo + hi))
            eps = _tolerance(T)
            col, col0, primed_col = T[:, c], T0[:, c], PRIMED_MASK[:, c]
            if col[~primed_col].max() >= col.max() - eps:
                reg = Regime.Low
            else:
                top = int(np.argmax(np.where(primed_col, col, -np.inf)))
                reg = Regime.Medium if col0[top] >= col0.max() - eps else Regime.High
            if runs and runs[-1][2] == reg:
                runs[-1] = (runs[-1][0], hi, reg)
            else:
                runs.append((lo, hi, reg))
        labels[c.name] = runs
    return labels


def transitions(m):
    if m.degenerate:
        raise DegenerateGame("constant game has no regimes")
    cands = crossing_points(m)
    edges = [0.0] + cands + [1.0]
    mids = [0.5 * (lo + hi) for lo, hi in zip(edges[:-1], edges[1:])]
    sets = [nash_table(extended_table(m, e)) for e in mids]
    thresholds = []
    ne_sets = [sets[0]]
    for k, e in enumerate(cands):
        if sets[k + 1] != sets[k]:
            thresholds.append(e)
            ne_sets.append(sets[k + 1])
    bounds = [0.0] + thresholds + [1.0]
    intervals = tuple(zip(bounds[:-1], bounds[1:]))
    ne_sets = tuple(frozenset((S(r), S(c)) for r, c in ne) for ne in ne_sets)
    return RegimeReport(
        tuple(thresholds), ne_sets, intervals, _lattice_regimes(m, cands)
    )


def closed_form_threshold(m):
    """The closed-form candidate (max(b, c) - min(a, d)) / (max(a, d) - min(a, d)).

    Not used by ``transitions``; for PD it gives 2, outside [0, 1], while
    the sweep finds 1/3.  Kept only for comparison.
    """
    den = max(m.a, m.d) - min(m.a, m.d)
    if den == 0:
        return float("inf")
    return (max(m.b, m.c) - min(m.a, m.d)) / den
