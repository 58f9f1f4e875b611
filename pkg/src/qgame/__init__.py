"""Classical and entangled symmetric 2x2 games."""

from .errors import (
    BoundaryGame,
    DegenerateCritical,
    DegenerateGame,
    InvalidChi,
    NonConvergence,
    SingularFormulation,
)
from .game_core import GParams, PayoffMatrix, classify, nash_equilibria, pareto_optima, to_gparams
from .eisert_sim import Entanglement, Su2Strategy, simulate_payoff

__version__ = "0.1.0"
