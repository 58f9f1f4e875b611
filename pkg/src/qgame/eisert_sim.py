"""Hilbert-space simulation of the two qubit entangled game.

This is the reference every closed formula in the package is checked
against.  The operator basis is (I, sz, sy, sx) throughout, matching the
quaternion layout ``U = a0 I + i (az sz + ay sy + ax sx)``.
"""

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidChi

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
BASIS = (I2, SZ, SY, SX)

PROJ00 = np.zeros((4, 4), dtype=complex)
PROJ00[0, 0] = 1.0

REAL_TOL = 1e-10


@dataclass(frozen=True)
class Entanglement:
    gamma: float
    e: float = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        g2 = self.gamma * self.gamma
        object.__setattr__(self, "e", 4.0 * g2 * (1.0 - g2))

    @classmethod
    def from_e(cls, e):
        """Pick the branch gamma in [0, 1/sqrt 2], where E is monotone."""
        if not 0.0 <= e <= 1.0:
            raise ValueError(f"E must lie in [0, 1], got {e}")
        g2 = 0.5 * (1.0 - math.sqrt(max(0.0, 1.0 - e)))
        return cls(math.sqrt(g2))

    @property
    def sqrt_e(self):
        return 2.0 * self.gamma * math.sqrt(1.0 - self.gamma * self.gamma)


@dataclass(frozen=True)
class Su2Strategy:
    a0: float
    az: float
    ay: float
    ax: float

    def __post_init__(self):
        n = self.a0**2 + self.az**2 + self.ay**2 + self.ax**2
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"strategy quaternion has norm^2 {n}, expected 1")

    @classmethod
    def from_vector(cls, q, renormalize=True):
        q = np.asarray(q, dtype=float)
        if renormalize:
            q = q / np.linalg.norm(q)
        return cls(*(float(x) for x in q))

    @classmethod
    def random(cls, rng):
        return cls.from_vector(rng.normal(size=4))

    def quaternion(self):
        return np.array([self.a0, self.az, self.ay, self.ax])

    def matrix(self):
        return self.a0 * I2 + 1j * (self.az * SZ + self.ay * SY + self.ax * SX)

    def chi(self):
        return ChiMatrix.from_unitary(self)

    def __neg__(self):
        return Su2Strategy(-self.a0, -self.az, -self.ay, -self.ax)


IDENTITY = Su2Strategy(1.0, 0.0, 0.0, 0.0)
FLIP = Su2Strategy(0.0, 0.0, 0.0, 1.0)


def entangler(ent):
    g = ent.gamma
    return math.sqrt(1.0 - g * g) * np.kron(I2, I2) + 1j * g * np.kron(SX, SX)


def payoff_operator(m, player="A"):
    if player == "A":
        return np.diag([m.a, m.b, m.c, m.d]).astype(float)
    if player == "B":
        return np.diag([m.a, m.c, m.b, m.d]).astype(float)
    raise ValueError(f"player must be 'A' or 'B', got {player!r}")


def final_state(ent, uA, uB, order="standard"):
    """Density matrix handed to the measurement.

    ``order="standard"`` uses J^dag U^dag J P00 J^dag U J for U = uA (x) uB.
    ``order="swapped"`` exchanges J and J^dag, kept for sensitivity checks.
    """
    J = entangler(ent)
    Jd = J.conj().T
    U = np.kron(_as_matrix(uA), _as_matrix(uB))
    Ud = U.conj().T
    if order == "standard":
        return Jd @ Ud @ J @ PROJ00 @ Jd @ U @ J
    if order == "swapped":
        return J @ Ud @ Jd @ PROJ00 @ J @ U @ Jd
    raise ValueError(f"unknown conjugation order {order!r}")


def _as_matrix(u):
    return u.matrix() if isinstance(u, Su2Strategy) else np.asarray(u, dtype=complex)


def _real(z, what="value"):
    if abs(z.imag) > REAL_TOL * max(1.0, abs(z.real)):
        raise ArithmeticError(f"{what} has imaginary part {z.imag}")
    return float(z.real)


def simulate_payoff(ent, uA, uB, m, order="standard"):
    rho = final_state(ent, uA, uB, order)
    pa = _real(np.trace(rho @ payoff_operator(m, "A")), "payoff A")
    pb = _real(np.trace(rho @ payoff_operator(m, "B")), "payoff B")
    return pa, pb


def outcome_distribution(ent, uA, uB, order="standard"):
    rho = final_state(ent, uA, uB, order)
    return np.real(np.diag(rho)).copy()


class OneTermKind(enum.Enum):
    Unitary = "Unitary"
    Antiunitary = "Antiunitary"
    NotTracePreserving = "NotTracePreserving"


@dataclass(frozen=True)
class ChiMatrix:
    """Operation rho -> sum_ij chi_ij E_i^dag rho E_j over the fixed basis."""

    data: np.ndarray

    def __post_init__(self):
        chi = np.asarray(self.data, dtype=complex)
        if chi.shape != (4, 4):
            raise InvalidChi(f"chi must be 4x4, got {chi.shape}")
        if not np.allclose(chi, chi.conj().T, atol=1e-12):
            raise InvalidChi("chi is not Hermitian")
        if np.linalg.eigvalsh(chi).min() < -1e-10:
            raise InvalidChi("chi is not positive semidefinite")
        object.__setattr__(self, "data", chi)

    @classmethod
    def from_vector(cls, v):
        """Rank-1 chi for the single Kraus term sum_i v_i E_i."""
        v = np.asarray(v, dtype=complex)
        return cls(np.outer(v.conj(), v))

    @classmethod
    def from_unitary(cls, u):
        return cls.from_vector([u.a0, 1j * u.az, 1j * u.ay, 1j * u.ax])

    @classmethod
    def mixture(cls, weights, chis):
        total = sum(w * c.data for w, c in zip(weights, chis))
        return cls(total)

    def completeness(self):
        return sum(
            self.data[i, j] * BASIS[i].conj().T @ BASIS[j]
            for i in range(4)
            for j in range(4)
        )

    def is_complete(self, tol=1e-10):
        return np.linalg.eigvalsh(self.completeness()).max() <= 1.0 + tol

    def is_trace_preserving(self, tol=1e-10):
        return np.allclose(self.completeness(), I2, atol=tol)

    def apply(self, rho):
        return sum(
            self.data[i, j] * BASIS[i].conj().T @ rho @ BASIS[j]
            for i in range(4)
            for j in range(4)
        )


def embed_classical(p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    return ChiMatrix(np.diag([1.0 - p, 0.0, 0.0, p]).astype(complex))


def classify_one_term(v, tol=1e-10):
    v = np.asarray(v, dtype=complex)
    if abs(np.linalg.norm(v) - 1.0) > 1e-8:
        raise ValueError("one-term vector must have unit norm")
    vec = v[1:]
    if np.all(np.abs(vec.real) <= tol) and abs(v[0].imag) <= tol:
        return OneTermKind.Unitary
    if np.all(np.abs(vec.imag) <= tol) and abs(v[0].real) <= tol:
        return OneTermKind.Antiunitary
    return OneTermKind.NotTracePreserving


@dataclass(frozen=True)
class PayoffTensor:
    data: np.ndarray
    ent: Entanglement
    game: object
    player: str = "A"

    def to_json(self):
        """Flat row-major list of 256 entries, each an [re, im] pair.

        Over the Pauli basis the entries are complex; only the contraction
        with Hermitian chis is real.
        """
        flat = np.asarray(self.data, dtype=complex).reshape(-1)
        return json.dumps([[float(z.real), float(z.imag)] for z in flat])

    @classmethod
    def from_json(cls, text, ent, game, player="A"):
        """Accepts the pair layout of ``to_json`` or plain real numbers."""
        flat = [complex(*x) if isinstance(x, list) else complex(x) for x in json.loads(text)]
        if len(flat) != 256:
            raise ValueError(f"expected 256 tensor entries, got {len(flat)}")
        return cls(np.array(flat).reshape(4, 4, 4, 4), ent, game, player)


def build_payoff_tensor(ent, m, player="A", order="standard"):
    """P[i,j,k,l] = Tr(J^dag (Ei Ek)^dag J P00 J^dag (Ej El) J G)."""
    J = entangler(ent)
    Jd = J.conj().T
    if order == "swapped":
        J, Jd = Jd, J
    G = payoff_operator(m, player)
    start = J @ PROJ00 @ Jd
    prods = [[np.kron(BASIS[i], BASIS[k]) for k in range(4)] for i in range(4)]
    # the chi contraction conjugates the left operators: E_i^dag ... E_j
    left = [[Jd @ prods[i][k].conj().T for k in range(4)] for i in range(4)]
    right = [[prods[j][l] @ J @ G for l in range(4)] for j in range(4)]
    P = np.zeros((4, 4, 4, 4), dtype=complex)
    for i in range(4):
        for k in range(4):
            L = left[i][k] @ start
            for j in range(4):
                for l in range(4):
                    P[i, j, k, l] = np.trace(L @ right[j][l])
    return PayoffTensor(P, ent, m, player)


def chi_payoff(chiA, chiB, p):
    for name, chi in (("A", chiA), ("B", chiB)):
        if not chi.is_complete():
            raise InvalidChi(f"chi of player {name} violates completeness")
    val = np.einsum("ij,kl,ijkl->", chiA.data, chiB.data, p.data)
    return _real(val, "chi payoff")


def classical_mixed_payoff(m, pA, pB):
    return (
        (1 - pA) * (1 - pB) * m.a
        + (1 - pA) * pB * m.b
        + pA * (1 - pB) * m.c
        + pA * pB * m.d
    )


def mixed_payoff(ent, weights, strategies_a, strategies_b, m):
    """Payoff of independent mixtures of unitaries for both players."""
    wA, wB = weights
    pa = pb = 0.0
    for x, ua in zip(wA, strategies_a):
        for y, ub in zip(wB, strategies_b):
            a, b = simulate_payoff(ent, ua, ub, m)
            pa += x * y * a
            pb += x * y * b
    return pa, pb
