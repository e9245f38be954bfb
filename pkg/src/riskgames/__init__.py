"""Equilibria for finite stochastic games with random payoffs.

Alongside classical Nash equilibria this package computes risk-averse
equilibria, where each player maximizes the probability of receiving their
best payoff in a single play, plus the M-round commit-game and
independent-randomness variants, with a seeded Monte Carlo harness for
comparing the concepts empirically.
"""

from .commit import CommitGame, commit_game, commit_tensor, solve_commit
from .dist import (
    Atom,
    GaussComponent,
    GridDensity,
    PayoffDistribution,
    build_payoff,
    convolve_power,
    prob_max,
)
from .equilibrium import (
    Concept,
    Elimination,
    EquilibriumResult,
    Kind,
    iesds,
    is_strictly_dominated,
    mixed_equilibria_2p,
    pure_equilibria,
)
from .game import (
    MixedProfile,
    PureProfile,
    StochasticGame,
    StrategySet,
    expected_tensor,
    mixture_payoff,
    opponent_profiles,
    profile_weight,
)
from .gamefile import dump_game, load_game, save_game
from .rae2 import Rae2Evaluation, rae2_is_strictly_dominated, rae2_mixed_2x2, rae2_prob
from .simulate import SimConfig, SimReport, compare_equilibria, indifference_test, sweep
from .tensor import ProbabilityTensor, build_tensor, mixed_br_prob

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "CommitGame",
    "Concept",
    "Elimination",
    "EquilibriumResult",
    "GaussComponent",
    "GridDensity",
    "Kind",
    "MixedProfile",
    "PayoffDistribution",
    "ProbabilityTensor",
    "PureProfile",
    "Rae2Evaluation",
    "SimConfig",
    "SimReport",
    "StochasticGame",
    "StrategySet",
    "build_payoff",
    "build_tensor",
    "commit_game",
    "commit_tensor",
    "compare_equilibria",
    "convolve_power",
    "dump_game",
    "expected_tensor",
    "iesds",
    "indifference_test",
    "is_strictly_dominated",
    "load_game",
    "mixed_br_prob",
    "mixed_equilibria_2p",
    "mixture_payoff",
    "opponent_profiles",
    "prob_max",
    "profile_weight",
    "pure_equilibria",
    "rae2_is_strictly_dominated",
    "rae2_mixed_2x2",
    "rae2_prob",
    "save_game",
    "solve_commit",
    "sweep",
]
