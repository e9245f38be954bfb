"""Risk-averse probability tensor and its contraction against mixed profiles.

Entry (i, s) is the probability that player i's payoff at s is at least the
payoff of every own deviation, with the opponents' pure profile shared by
all hypothetical own actions. A build touches every (player, profile) cell
once; the finished tensor is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .dist import QUAD_TOL, prob_max
from .game import MixedProfile, StochasticGame, insert_action, opponent_profiles, profile_weight

ROW_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class ProbabilityTensor:
    """Per-player best-payoff probabilities; shape (N, *game shape)."""

    values: np.ndarray

    def value(self, i: int, s: tuple[int, ...]) -> float:
        return float(self.values[(i, *s)])

    def player_matrix(self, i: int) -> np.ndarray:
        return self.values[i]


def build_tensor(g, *, quad_tol: float = QUAD_TOL) -> ProbabilityTensor:
    """Evaluate the best-payoff probability for every (player, profile) cell.

    Accepts any game-like object with ``strategies`` and ``payoff(i, s)``;
    payoffs may be continuous, atomic, or grid densities. A player with a
    single strategy gets probability 1 everywhere.
    """
    shape = tuple(len(s) for s in g.strategies)
    n_players = len(shape)
    values = np.empty((n_players, *shape))
    for i in range(n_players):
        own = shape[i]
        for frag in _fragments(shape, i):
            family = [g.payoff(i, insert_action(frag, i, a)) for a in range(own)]
            for a in range(own):
                values[(i, *insert_action(frag, i, a))] = prob_max(
                    a, family, quad_tol=quad_tol
                )
    return ProbabilityTensor(values)


def _fragments(shape: tuple[int, ...], i: int):
    sizes = [n for j, n in enumerate(shape) if j != i]
    return product(*(range(n) for n in sizes))


def mixed_br_prob(
    t: ProbabilityTensor, g: StochasticGame, i: int, s_i: int, p: MixedProfile
) -> float:
    """Probability that s_i is payoff-maximal against the mixed profile p,
    with shared opponent randomness: the tensor contracted with the
    opponents' joint profile weights."""
    total = 0.0
    for frag in opponent_profiles(g, i):
        w = profile_weight(p, i, frag)
        if w > 0.0:
            total += w * t.value(i, insert_action(frag, i, s_i))
    return total
