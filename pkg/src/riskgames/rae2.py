"""Independent-randomness equilibrium variant.

In the main concept all hypothetical own actions face the same realized
opponent profile. Here each own action faces an independently drawn one, so
probabilities expand over tuples of opponent profiles, one slot per own
action. Because all payoffs are independent, the tuple-weighted sum
collapses exactly to a single best-payoff integral over the per-action
mixture distributions; dominance, however, quantifies over every tuple and
is enumerated explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .dist import PayoffDistribution, prob_max
from .errors import NoInteriorRoot, TupleExplosion
from .equilibrium import Concept, EquilibriumResult, mixed_result
from .game import (
    MixedProfile,
    StochasticGame,
    insert_action,
    mixture_payoff,
    opponent_profiles,
)

DEFAULT_TUPLE_CAP = 10**6
RESIDUAL_TOL = 1e-6
DOMINANCE_MARGIN = 1e-9


@dataclass(frozen=True)
class Rae2Evaluation:
    """Probability that one own action wins under independent opponent draws."""

    player: int
    action: int
    profile: MixedProfile
    value: float
    terms: int  # opponent-profile tuples the expansion ranges over


def _tuple_count(g: StochasticGame, i: int, cap: int) -> int:
    n_frags = len(opponent_profiles(g, i))
    terms = n_frags ** g.shape[i]
    if terms > cap:
        raise TupleExplosion(
            f"{terms} opponent-profile tuples for player {i} exceed cap {cap}"
        )
    return terms


def rae2_prob(
    g: StochasticGame,
    i: int,
    s_i: int,
    p: MixedProfile,
    *,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
) -> Rae2Evaluation:
    """P(action s_i draws the best payoff) with an independent opponent
    profile drawn from p for every own action.

    Independence lets the tuple expansion factor into one integral over the
    per-action mixture distributions, which is how the value is computed;
    the tuple count is still reported and capped.
    """
    terms = _tuple_count(g, i, tuple_cap)
    family = [mixture_payoff(g, i, a, p) for a in range(g.shape[i])]
    value = prob_max(s_i, family)
    return Rae2Evaluation(i, s_i, p, value, terms)


def _pair_prob(
    g: StochasticGame, i: int, a: int, frag_a, b: int, frag_b
) -> float:
    """P(payoff of (a, frag_a) >= payoff of (b, frag_b)) for player i."""
    fam = [g.payoff(i, insert_action(frag_a, i, a)), g.payoff(i, insert_action(frag_b, i, b))]
    return prob_max(0, fam)


def rae2_is_strictly_dominated(
    g: StochasticGame,
    i: int,
    s_i: int,
    *,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
    margin: float = DOMINANCE_MARGIN,
) -> bool:
    """Dominance with per-action opponent assignments.

    s_i is dominated by some d if, for every assignment of opponent
    fragments to own actions, the win probability of d beats that of s_i
    when the two actions' assigned fragments are switched and all other
    assignments are held fixed. For more than two own actions this reads
    the switched-pair association literally.
    """
    _tuple_count(g, i, tuple_cap)
    actions = list(range(g.shape[i]))
    frags = opponent_profiles(g, i)
    cache: dict[tuple, float] = {}

    def win_prob(cand: int, assign: dict[int, tuple]) -> float:
        key = (cand, tuple(assign[a] for a in actions))
        if key not in cache:
            family = [
                g.payoff(i, insert_action(assign[a], i, a)) for a in actions
            ]
            cache[key] = prob_max(cand, family)
        return cache[key]

    for d in actions:
        if d == s_i:
            continue
        dominates = True
        for combo in product(frags, repeat=len(actions)):
            assign = dict(zip(actions, combo))
            swapped = dict(assign)
            swapped[d], swapped[s_i] = assign[s_i], assign[d]
            if not win_prob(d, assign) > win_prob(s_i, swapped) + margin:
                dominates = False
                break
        if dominates:
            return True
    return False


def _indifference_quadratic(g: StochasticGame, responder: int) -> np.ndarray:
    """Coefficients (c2, c1, c0) of the responder's first-action win
    probability as a quadratic in the opponent's first-action weight."""
    opponent = 1 - responder
    p = {}
    for fa in range(g.shape[opponent]):
        for fb in range(g.shape[opponent]):
            p[(fa, fb)] = _pair_prob(g, responder, 0, (fa,), 1, (fb,))
    c2 = p[(0, 0)] - p[(0, 1)] - p[(1, 0)] + p[(1, 1)]
    c1 = p[(0, 1)] + p[(1, 0)] - 2.0 * p[(1, 1)]
    c0 = p[(1, 1)]
    return np.array([c2, c1, c0])


def _roots_in_unit(coeffs: np.ndarray) -> list[float] | None:
    """Real roots of c2 x^2 + c1 x + (c0 - 1/2) in [0, 1]; None if the
    equation is identically satisfied."""
    c2, c1, c0 = coeffs
    c0 = c0 - 0.5
    eps = 1e-9
    if abs(c2) < eps and abs(c1) < eps:
        return None if abs(c0) < eps else []
    if abs(c2) < eps:
        roots = [-c0 / c1]
    else:
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc < 0:
            roots = []
        else:
            sq = math.sqrt(disc)
            roots = [(-c1 - sq) / (2.0 * c2), (-c1 + sq) / (2.0 * c2)]
    return sorted(
        {min(max(r, 0.0), 1.0) for r in roots if -1e-9 <= r <= 1.0 + 1e-9}
    )


def rae2_mixed_2x2(
    g: StochasticGame,
    *,
    residual_tol: float = RESIDUAL_TOL,
) -> list[EquilibriumResult]:
    """Mixed equilibria of a 2x2 game under independent opponent draws.

    Each player is made indifferent by the opponent's mixing weight, which
    solves a quadratic in closed form; root pairs are verified against the
    two indifference conditions. A player whose condition holds identically
    gets weight 1/2 and the result is flagged degenerate.
    """
    if g.n_players != 2 or g.shape != (2, 2):
        raise ValueError("closed-form solving needs a 2-player 2x2 game")

    notes = []
    weight_options: list[list[float]] = []
    for responder in (0, 1):
        roots = _roots_in_unit(_indifference_quadratic(g, responder))
        if roots is None:
            notes.append(f"player {2 - responder} weight unconstrained (degenerate)")
            roots = [0.5]
        if not roots:
            raise NoInteriorRoot(
                f"no indifference root in [0, 1] for player {responder + 1}"
            )
        weight_options.append(roots)

    results = []
    # responder 0's condition pins player 2's weight and vice versa
    for w2 in weight_options[0]:
        for w1 in weight_options[1]:
            profile = MixedProfile(((w1, 1.0 - w1), (w2, 1.0 - w2)))
            vals = [rae2_prob(g, i, 0, profile).value for i in (0, 1)]
            if notes or all(abs(v - 0.5) <= residual_tol for v in vals):
                results.append(
                    mixed_result(Concept.RAE2, profile, vals, notes=notes)
                )
    return results
