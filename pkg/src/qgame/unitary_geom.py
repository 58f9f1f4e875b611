"""SO(3) picture of unitary play.

A unitary strategy acts on the Pauli vector of each qubit as a rotation.
Rotations are written in the (z, y, x) basis, the same order as the
operator basis used by the simulator.

In the frame where T and G are diagonal the expected payoff of A reads

    g0/2 + 1/2 [ Tr((r1 RA r1^T + kB zz) T (r2 RB^T + kA zz) G)
                 - (1 - E)^2 gA gB / gAB ]

with kA = (1 - E) gA / gAB and kB = (1 - E) gB / gAB.  The frame rotation
r1 acts on A by conjugation; r2 is the identity.  Both were fixed by
matching the simulator.  The 1/2 is the scale of the G transform.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.spatial.transform import Rotation as _SciRotation

from .eisert_sim import I2, SX, SY, SZ, Entanglement, Su2Strategy
from .errors import DegenerateCritical, SingularFormulation
from .game_core import to_gparams

PAULI3 = (SZ, SY, SX)
ZZ = np.diag([1.0, 0.0, 0.0])
R1 = np.array([[-1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, -1.0, 0.0]])
R2 = np.eye(3)

# so(3) generators, (K_i)_ab = -eps_iab
GENERATORS = np.array(
    [
        [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
        [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
        [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
    ],
    dtype=float,
)

GAB_TOL = 1e-12
DEGENERATE_RATIO = 1e-9


@dataclass(frozen=True)
class Rotation3:
    matrix: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.matrix, dtype=float)
        if r.shape != (3, 3):
            raise ValueError(f"rotation must be 3x3, got {r.shape}")
        if not np.allclose(r @ r.T, np.eye(3), atol=1e-10):
            raise ValueError("matrix is not orthogonal")
        if abs(np.linalg.det(r) - 1.0) > 1e-10:
            raise ValueError("matrix does not have determinant +1")
        object.__setattr__(self, "matrix", r)

    @classmethod
    def identity(cls):
        return cls(np.eye(3))

    @classmethod
    def from_rotvec(cls, w):
        return cls(expm(np.einsum("i,ijk->jk", np.asarray(w, float), GENERATORS)))

    @classmethod
    def random(cls, rng):
        return cls(su2_to_so3(Su2Strategy.random(rng)))

    def rotvec(self):
        return rotvec(self.matrix)

    @property
    def T(self):
        return self.matrix.T

    def __matmul__(self, other):
        return Rotation3(self.matrix @ _mat(other))


def _mat(r):
    return r.matrix if isinstance(r, Rotation3) else np.asarray(r, dtype=float)


def rotvec(r):
    """Exponential coordinates w with r = exp(sum_i w_i K_i)."""
    return _SciRotation.from_matrix(_mat(r)).as_rotvec()


def axis_rotation(axis, theta):
    """Rotation by ``theta`` about the named axis, in (z, y, x) order."""
    k = {"Z": 0, "Y": 1, "X": 2}[axis.upper()]
    w = np.zeros(3)
    w[k] = theta
    return expm(np.einsum("i,ijk->jk", w, GENERATORS))


class CriticalBranch(tuple):
    """Signs (s1, s2) selecting one of the four critical responses."""

    def __new__(cls, s1=1, s2=1):
        if s1 not in (1, -1) or s2 not in (1, -1):
            raise ValueError(f"branch signs must be +1 or -1, got ({s1}, {s2})")
        return super().__new__(cls, (int(s1), int(s2)))

    @classmethod
    def parse(cls, text):
        parts = text.replace(" ", "").split(",")
        if len(parts) != 2:
            raise ValueError(f"branch must look like '+,-', got {text!r}")
        signs = []
        for p in parts:
            if p in ("+", "+1", "1"):
                signs.append(1)
            elif p in ("-", "-1"):
                signs.append(-1)
            else:
                raise ValueError(f"bad branch sign {p!r}")
        return cls(*signs)

    @property
    def s1(self):
        return self[0]

    @property
    def s2(self):
        return self[1]

    def signs(self):
        return np.array([self.s1 * self.s2, self.s2, self.s1], dtype=float)

    def __str__(self):
        return ",".join("+" if s > 0 else "-" for s in self)

    def expected_signature(self):
        return {(1, 1): 3, (1, -1): 0}.get(tuple(self), None)


MAX_BRANCH = CriticalBranch(1, 1)
MIN_BRANCH = CriticalBranch(1, -1)
ALL_BRANCHES = tuple(CriticalBranch(a, b) for a in (1, -1) for b in (1, -1))


@dataclass(frozen=True)
class GameTensors:
    tMat: np.ndarray
    gMat: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    e: float
    g: object


def game_tensors(m, ent):
    e = ent.e if isinstance(ent, Entanglement) else float(ent)
    g = to_gparams(m)
    s = math.sqrt(e)
    return GameTensors(
        tMat=np.diag([1.0, s, s]),
        gMat=np.diag([g.gAB, s * g.gB, s * g.gA]),
        r1=R1.copy(),
        r2=R2.copy(),
        e=e,
        g=g,
    )


def su2_to_so3(u):
    U = u.matrix() if isinstance(u, Su2Strategy) else np.asarray(u, complex)
    Ud = U.conj().T
    return np.array(
        [[0.5 * np.trace(pa @ Ud @ pb @ U).real for pb in PAULI3] for pa in PAULI3]
    )


def quaternions_to_so3(q):
    """Vectorized lift for an (n, 4) array of (a0, az, ay, ax)."""
    q = np.asarray(q, dtype=float)
    U = (
        q[:, 0, None, None] * I2
        + 1j * (q[:, 1, None, None] * SZ + q[:, 2, None, None] * SY + q[:, 3, None, None] * SX)
    )
    Ud = np.conj(np.swapaxes(U, 1, 2))
    P = np.stack(PAULI3)
    # R[n, a, b] = 1/2 Tr(P_a U^dag P_b U)
    left = np.einsum("aij,njk->naik", P, Ud)
    right = np.einsum("bij,njk->nbik", P, U)
    return 0.5 * np.einsum("naik,nbki->nab", left, right).real


def so3_to_su2(r):
    """Lift back to SU(2), choosing the sheet with a0 >= 0."""
    r = _mat(r)
    x, y, z, w = _SciRotation.from_matrix(_swap_xz(r)).as_quat()
    best = None
    for q in ((w, z, y, x), (w, -z, -y, -x)):
        q = np.array(q) * (1 if q[0] >= 0 else -1)
        u = Su2Strategy.from_vector(q)
        err = np.abs(su2_to_so3(u) - r).max()
        if best is None or err < best[0]:
            best = (err, u)
    return best[1]


_SWAP_XZ = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])


def _swap_xz(r):
    return _SWAP_XZ @ r @ _SWAP_XZ


def _kterms(t):
    g = t.g
    if abs(g.gAB) < GAB_TOL:
        raise SingularFormulation("gAB vanishes; use the expanded payoff instead")
    return (1 - t.e) * g.gA / g.gAB, (1 - t.e) * g.gB / g.gAB


def so3_payoff(rA, rB, t):
    """A's payoff in the factored trace form."""
    rA, rB = _mat(rA), _mat(rB)
    kA, kB = _kterms(t)
    g = t.g
    left = t.r1 @ rA @ t.r1.T + kB * ZZ
    right = t.r2 @ rB.T + kA * ZZ
    tr = np.trace(left @ t.tMat @ right @ t.gMat)
    return g.g0 / 2 + 0.5 * (tr - (1 - t.e) ** 2 * g.gA * g.gB / g.gAB)


def so3_payoff_expanded(rA, rB, t):
    """Same value without the division by gAB."""
    rA, rB = _mat(rA), _mat(rB)
    return float(np.trace(rA @ a_matrix(rB, t, strict=False)) + a_offset(rB, t))


def so3_payoffs(rA, rB, t):
    """(payA, payB); B's payoff is A's with the roles exchanged."""
    return so3_payoff_expanded(rA, rB, t), so3_payoff_expanded(rB, rA, t)


def a_matrix(rB, t, strict=True):
    """Matrix M with payoff_A = Tr(RA M) + a_offset(rB, t).

    The frame conjugation r1 and the overall 1/2 are folded in, so the
    gradient and the critical responses can work with RA directly.
    """
    g = t.g
    if g.gA == 0 and g.gB == 0 and g.gAB == 0:
        return np.zeros((3, 3))
    if strict:
        _kterms(t)
    rB = _mat(rB)
    core = t.tMat @ t.r2 @ rB.T @ t.gMat + (1 - t.e) * g.gA * ZZ
    return 0.5 * t.r1.T @ core @ t.r1


def b_matrix(rA, t, strict=True):
    """B's matrix against A's rotation; the game is symmetric under the swap."""
    return a_matrix(rA, t, strict)


def a_offset(rB, t):
    g = t.g
    return g.g0 / 2 + 0.5 * (1 - t.e) * g.gB * _mat(rB)[0, 0]


def signed_svd(aM):
    """aM = U diag(s) Vt with U, Vt in SO(3); s[2] may be negative."""
    U, s, Vt = np.linalg.svd(np.asarray(aM, dtype=float))
    s = s.copy()
    if np.linalg.det(U) < 0:
        U[:, 2] *= -1
        s[2] *= -1
    if np.linalg.det(Vt) < 0:
        Vt[2, :] *= -1
        s[2] *= -1
    return U, s, Vt


def critical_response(aM, branch=MAX_BRANCH, allow_degenerate=False):
    """Rotation R with R aM symmetric, picked by the branch signs.

    The eigenvalues of R aM are the signed singular values times
    (s1 s2, s2, s1).
    """
    branch = CriticalBranch(*branch)
    U, s, Vt = signed_svd(aM)
    top = abs(s[0])
    if top == 0.0 or abs(s[2]) < DEGENERATE_RATIO * top:
        if not allow_degenerate:
            null = Vt[np.abs(s) < DEGENERATE_RATIO * max(top, 1.0)]
            raise DegenerateCritical("response matrix is rank deficient", null)
    return Vt.T @ np.diag(branch.signs()) @ U.T


def predicted_eigenvalues(aM, branch):
    """Eigenvalues of R aM at the branch response, in singular order."""
    _, s, _ = signed_svd(aM)
    return CriticalBranch(*branch).signs() * s


def gradient(rA, aM):
    X = _mat(rA) @ np.asarray(aM, dtype=float)
    return np.einsum("iab,ba->i", GENERATORS, X)


def hessian(rA, aM):
    """Hessian in exponential coordinates and its count of negative values."""
    X = _mat(rA) @ np.asarray(aM, dtype=float)
    H = 0.5 * (X + X.T) - np.eye(3) * np.trace(X)
    eig = np.linalg.eigvalsh(H)
    return H, int(np.sum(eig < 0))


class CriticalKind(enum.Enum):
    Maximum = "maximum"
    Minimum = "minimum"
    Saddle = "saddle"


def signature_kind(signature):
    if signature == 3:
        return CriticalKind.Maximum
    if signature == 0:
        return CriticalKind.Minimum
    return CriticalKind.Saddle


def finite_difference_gradient(f, r, step=1e-5):
    r = _mat(r)
    out = np.zeros(3)
    for i in range(3):
        up = expm(step * GENERATORS[i]) @ r
        dn = expm(-step * GENERATORS[i]) @ r
        out[i] = (f(up) - f(dn)) / (2 * step)
    return out


def finite_difference_hessian(f, r, step=1e-4):
    """Second derivatives along exp(sum_i w_i K_i) r at w = 0."""
    r = _mat(r)

    def at(w):
        return f(expm(np.einsum("i,ijk->jk", w, GENERATORS)) @ r)

    H = np.zeros((3, 3))
    f0 = at(np.zeros(3))
    eye = np.eye(3) * step
    for i in range(3):
        H[i, i] = (at(eye[i]) - 2 * f0 + at(-eye[i])) / step**2
        for j in range(i + 1, 3):
            v = (
                at(eye[i] + eye[j])
                - at(eye[i] - eye[j])
                - at(-eye[i] + eye[j])
                + at(-eye[i] - eye[j])
            ) / (4 * step**2)
            H[i, j] = H[j, i] = v
    return H


def z_coordinated(rA, rB, phi):
    """The pair of z rotations that leaves every payoff unchanged.

    A's rotation is composed on the right with a turn of -phi about z and
    B's with a turn of +phi.
    """
    return _mat(rA) @ axis_rotation("Z", -phi), _mat(rB) @ axis_rotation("Z", phi)


def _match_branch(candidates, aM, branch):
    target = np.sort(predicted_eigenvalues(aM, branch))
    best = None
    for R in candidates:
        X = R @ aM
        eig = np.sort(np.linalg.eigvalsh(0.5 * (X + X.T)))
        err = np.abs(eig - target).max()
        if best is None or err < best[0]:
            best = (err, R)
    return best[1]


def _planar(c, s):
    return np.array([[c, -s], [s, c]])


def _reflection(c, s):
    return np.array([[c, s], [s, -c]])


def block_candidates(aM, plane):
    """The four critical rotations when aM only couples the two axes in
    ``plane``; the third axis is left alone.

    With the block [[al, be], [ga, de]], a planar rotation makes it
    symmetric at angle atan2(ga - be, al + de) (norm N1) and a reflection
    at atan2(be + ga, al - de) (norm N2).  Each comes with its antipode;
    reflections pair with a sign flip on the third axis.
    """
    i, j = plane
    k = 3 - i - j
    al, be, ga, de = aM[i, i], aM[i, j], aM[j, i], aM[j, j]
    n1 = math.hypot(al + de, ga - be)
    n2 = math.hypot(al - de, be + ga)
    if n1 == 0.0 or n2 == 0.0:
        raise DegenerateCritical("planar block has no unique symmetrizer")
    # R2 @ B symmetric: for rotation R(phi), c = (al + de)/N1, s = (be - ga)/N1
    c1, s1 = (al + de) / n1, (be - ga) / n1
    c2, s2 = (al - de) / n2, (be + ga) / n2
    out = []
    for sign, blk, third in (
        (1, _planar(c1, s1), 1),
        (-1, _planar(c1, s1), 1),
        (1, _reflection(c2, s2), -1),
        (-1, _reflection(c2, s2), -1),
    ):
        R = np.zeros((3, 3))
        b = sign * blk
        R[i, i], R[i, j], R[j, i], R[j, j] = b[0, 0], b[0, 1], b[1, 0], b[1, 1]
        R[k, k] = third
        out.append(R)
    return out


def one_param_response(axis, theta, t, branch=MAX_BRANCH):
    """Closed-form response when B plays a rotation about one axis.

    B's rotation is ``axis_rotation(axis, theta)``.  For the z axis the
    response is a fixed sign pattern times the inverse of the rotated
    block; for x and y the 2x2 block is symmetrized directly.
    """
    branch = CriticalBranch(*branch)
    rB = axis_rotation(axis, theta)
    aM = a_matrix(rB, t)
    _, s, _ = signed_svd(aM)
    if abs(s[0]) == 0.0 or abs(s[2]) < DEGENERATE_RATIO * abs(s[0]):
        raise DegenerateCritical("response matrix is rank deficient")
    axis = axis.upper()
    if axis == "Z":
        return _z_response(aM, branch)
    # in A's frame the y and x axes are exchanged by r1
    plane = {"X": (0, 2), "Y": (0, 1)}[axis]
    return _match_branch(block_candidates(aM, plane), aM, branch)


def _z_response(aM, branch):
    # aM = blk(1, Rot(phi)) diag(lam): lam from column norms, phi from column 1
    lam0 = aM[0, 0]
    col1 = aM[1:, 1]
    col2 = aM[1:, 2]
    lam1 = math.hypot(*col1)
    lam2 = math.hypot(*col2)
    if lam1 > 0:
        c, s = col1 / lam1
    else:
        c, s = col2[1] / lam2, -col2[0] / lam2
    # orientation of the second column decides the sign of lam2
    lam2 = lam2 if abs(col2[0] + s * lam2) + abs(col2[1] - c * lam2) < 1e-9 * max(lam2, 1) else -lam2
    blk = np.eye(3)
    blk[1:, 1:] = _planar(c, s)
    lam = np.array([lam0, lam1, lam2])
    order = np.argsort(-np.abs(lam), kind="stable")
    signs_sorted = branch.signs()
    sign_lam = np.sign(lam)
    sign_lam[sign_lam == 0] = 1
    total = np.prod(sign_lam)
    D = np.zeros(3)
    for rank, axis_idx in enumerate(order):
        D[axis_idx] = signs_sorted[rank] * sign_lam[axis_idx]
    D[order[2]] *= total
    return np.diag(D) @ blk.T
