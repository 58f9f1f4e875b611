"""Sampling and fixed-point searches built on the SO(3) response maps."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import semidet
from .eisert_sim import Entanglement
from .errors import DegenerateCritical, NonConvergence
from .game_core import CLASS_TABLE, NeStructure, class_ids
from .unitary_geom import (
    MAX_BRANCH,
    CriticalBranch,
    a_matrix,
    b_matrix,
    critical_response,
    game_tensors,
    gradient,
    quaternions_to_so3,
    rotvec,
    so3_payoffs,
    su2_to_so3,
)


@dataclass(frozen=True)
class CloudPoint:
    payA: float
    payB: float
    theta: tuple
    branch: CriticalBranch
    degenerate: bool = False


def random_rotations(rng, n):
    q = rng.normal(size=(n, 4))
    q /= np.linalg.norm(q, axis=1)[:, None]
    return quaternions_to_so3(q)


def payoff_cloud(m, gamma, n, seed=0, branch=MAX_BRANCH):
    """A wanders over random rotations, B answers on the given branch."""
    if n < 1:
        raise ValueError("n must be at least 1")
    branch = CriticalBranch(*branch)
    t = game_tensors(m, Entanglement(gamma))
    rng = np.random.default_rng(seed)
    out = []
    for rA in random_rotations(rng, n):
        bad = False
        bM = b_matrix(rA, t, strict=False)
        try:
            rB = critical_response(bM, branch)
        except DegenerateCritical:
            bad = True
            rB = critical_response(bM, branch, allow_degenerate=True)
        pa, pb = so3_payoffs(rA, rB, t)
        out.append(CloudPoint(pa, pb, tuple(rotvec(rA)), branch, bad))
    return out


@dataclass(frozen=True)
class AtlasRow:
    class_id: int
    sample_count: int
    fraction: float

    @property
    def label(self):
        return CLASS_TABLE[self.class_id][0]


def sample_sphere(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1)[:, None]


def atlas(n, seed=0, chunk=250_000):
    """Class fractions over uniform unit vectors (gA, gB, gAB)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    counts = np.zeros(13, dtype=np.int64)
    ss = np.random.SeedSequence(seed)
    nchunks = math.ceil(n / chunk)
    for k, child in enumerate(ss.spawn(nchunks)):
        size = min(chunk, n - k * chunk)
        v = sample_sphere(np.random.default_rng(child), size)
        counts += np.bincount(class_ids(*v.T), minlength=13)
    return [
        AtlasRow(k, int(counts[k]), counts[k] / n) for k in range(1, 13) if counts[k]
    ]


def ne_structure_fractions(rows):
    out = {s: 0.0 for s in NeStructure}
    for r in rows:
        out[CLASS_TABLE[r.class_id][1]] += r.fraction
    return out


@dataclass
class FixedPoint:
    rA: np.ndarray
    rB: np.ndarray
    payA: float
    payB: float
    stable: bool
    starts: list = field(default_factory=list)


@dataclass
class EquilibriumSearch:
    points: list
    failures: list

    def payoffs(self):
        return [(p.payA, p.payB) for p in self.points]


def _step(rA, rB, t, branch):
    nA = critical_response(a_matrix(rB, t, strict=False), branch, allow_degenerate=True)
    nB = critical_response(b_matrix(nA, t, strict=False), branch, allow_degenerate=True)
    return nA, nB


def _iterate(rA, rB, t, branch, tol, max_iter):
    for it in range(max_iter):
        nA, nB = _step(rA, rB, t, branch)
        d = np.linalg.norm(nA - rA) + np.linalg.norm(nB - rB)
        rA, rB = nA, nB
        if d < tol:
            return rA, rB, it + 1
    raise NonConvergence(f"no fixed point after {max_iter} iterations")


def _mutually_critical(rA, rB, t, tol):
    gA = gradient(rA, a_matrix(rB, t, strict=False))
    gB = gradient(rB, b_matrix(rA, t, strict=False))
    return max(np.linalg.norm(gA), np.linalg.norm(gB)) <= tol


def find_equilibria(
    m,
    gamma,
    starts=64,
    seed=0,
    branch=MAX_BRANCH,
    tol=1e-8,
    max_iter=500,
    dedup=1e-6,
    grad_tol=1e-7,
    semideterministic_seeds=True,
):
    """Fixed points of the composed response map.

    Random starts are iterated until successive iterates agree.  Unstable
    fixed points repel that iteration, so with ``semideterministic_seeds``
    the 16 pure semideterministic pairs are also tested directly: a pair
    the map leaves in place is kept with ``stable=False`` unless some
    random start also converged to it.
    """
    if starts < 1:
        raise ValueError("starts must be at least 1")
    branch = CriticalBranch(*branch)
    t = game_tensors(m, Entanglement(gamma))
    points, failures = [], []

    def record(rA, rB, stable, label):
        if not _mutually_critical(rA, rB, t, grad_tol):
            failures.append((label, "fixed point failed the criticality check"))
            return
        for p in points:
            d = math.hypot(np.linalg.norm(p.rA - rA), np.linalg.norm(p.rB - rB))
            if d < dedup:
                p.stable = p.stable or stable
                p.starts.append(label)
                return
        pa, pb = so3_payoffs(rA, rB, t)
        points.append(FixedPoint(rA, rB, pa, pb, stable, [label]))

    for k in range(starts):
        rng = np.random.default_rng([seed, k])
        rA, rB = random_rotations(rng, 2)
        try:
            fA, fB, _ = _iterate(rA, rB, t, branch, tol, max_iter)
        except NonConvergence as exc:
            failures.append((k, str(exc)))
            continue
        record(fA, fB, True, k)

    if semideterministic_seeds:
        for sa in semidet.ORDER:
            for sb in semidet.ORDER:
                rA, rB = su2_to_so3(sa.su2()), su2_to_so3(sb.su2())
                nA, nB = _step(rA, rB, t, branch)
                if np.linalg.norm(nA - rA) + np.linalg.norm(nB - rB) < tol:
                    record(rA, rB, False, f"{sa.name}{sb.name}")
    return EquilibriumSearch(points, failures)


@dataclass(frozen=True)
class QuantumRow:
    e: float
    ne: frozenset
    ne_payoffs: tuple
    fixed_point_payoffs: tuple = ()

    @property
    def ne_count(self):
        return len(self.ne)


def quantum_classify(m, e_grid, fixed_points=False, starts=16, seed=0):
    """Per-E summary of the extended game and where it changes.

    Rows hold the NE set of the table at each grid value.  A change is
    reported for a step (e_k, e_k+1] that contains a regime threshold, so
    isolated ties such as E = 0, where primed and unprimed entries
    coincide and the NE set is momentarily larger, do not count.
    """
    grid = list(e_grid)
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("e_grid must be sorted")
    cuts = () if m.degenerate else semidet.transitions(m).thresholds
    rows = []
    for e in grid:
        g = semidet.extended_payoff(m, e)
        ne = frozenset(semidet.nash_4x4(g))
        pays = tuple(
            sorted({(round(g.payoff_a(r, c), 12), round(g.payoff_b(r, c), 12)) for r, c in ne})
        )
        fp = ()
        if fixed_points:
            res = find_equilibria(m, Entanglement.from_e(e).gamma, starts, seed)
            fp = tuple(sorted((round(p.payA, 9), round(p.payB, 9)) for p in res.points))
        rows.append(QuantumRow(float(e), ne, pays, fp))
    changes = [
        (a.e, b.e) for a, b in zip(rows, rows[1:]) if any(a.e < x <= b.e for x in cuts)
    ]
    return rows, changes
