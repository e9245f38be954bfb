"""Seeded Monte Carlo harness comparing equilibrium concepts.

Rounds are processed in fixed-size blocks; the generator for a block is
derived from (seed, purpose, block index) with counter-based Philox
bit streams, so results are bit-identical across runs and independent of
any future parallel split by blocks.

Two experiments: ``compare_equilibria`` plays two equilibria in independent
realizations and counts how often the first one pays more for one player;
``indifference_test`` draws the opponents' pure profile once per round and
compares the responder's two action payoffs under that same draw.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .equilibrium import (
    Concept,
    EquilibriumResult,
    Kind,
    mixed_equilibria_2p,
    pure_equilibria,
)
from .game import MixedProfile, StochasticGame, expected_tensor
from .tensor import build_tensor

BLOCK = 1 << 16


def _block_rng(seed: int, purpose: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(
        entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(purpose, block)
    )
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class SimConfig:
    """One comparison run: both concepts must come from the same game."""

    rounds: int
    seed: int
    player_under_test: int
    concepts: tuple[EquilibriumResult, EquilibriumResult]

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")


@dataclass(frozen=True)
class SimReport:
    rounds: int
    wins: int
    ties: int

    def __post_init__(self):
        if self.wins + self.ties > self.rounds:
            raise ValueError("wins + ties exceed rounds")

    @property
    def proportion(self) -> float:
        return self.wins / self.rounds

    @property
    def confidence_halfwidth(self) -> float:
        """3-sigma binomial half-width around the observed proportion."""
        p = self.proportion
        return 3.0 * np.sqrt(p * (1.0 - p) / self.rounds)


def _as_mixed(g: StochasticGame, result: EquilibriumResult) -> MixedProfile:
    if isinstance(result.profile, MixedProfile):
        return result.profile
    return MixedProfile.pure(g.shape, result.profile)


def _draw_actions(
    rng: np.random.Generator, cums: list[np.ndarray], n: int
) -> np.ndarray:
    """One action index per player per round; shape (n, N)."""
    u = rng.random((n, len(cums)))
    out = np.empty((n, len(cums)), dtype=np.intp)
    for j, cum in enumerate(cums):
        out[:, j] = np.searchsorted(cum, u[:, j], side="right")
    return out


def _payoff_draws(
    rng: np.random.Generator,
    g: StochasticGame,
    player: int,
    actions: np.ndarray,
) -> np.ndarray:
    """Sample the player's payoff for each round's pure profile."""
    shape = g.shape
    codes = np.ravel_multi_index(actions.T, shape)
    out = np.empty(actions.shape[0])
    for code in np.unique(codes):
        sel = codes == code
        profile = tuple(int(x) for x in np.unravel_index(int(code), shape))
        out[sel] = g.payoff(player, profile).sample(rng, size=int(sel.sum()))
    return out


def _cums(p: MixedProfile) -> list[np.ndarray]:
    # tiny negative rounding is clipped so searchsorted stays in range
    return [np.minimum(np.cumsum(v), 1.0) for v in (p.vector(j) for j in range(len(p.weights)))]


def compare_equilibria(g: StochasticGame, cfg: SimConfig) -> SimReport:
    """Proportion of rounds where the first concept pays the tested player
    strictly more than the second; draws are independent across concepts."""
    profiles = [_as_mixed(g, c) for c in cfg.concepts]
    cums = [_cums(p) for p in profiles]
    wins = 0
    ties = 0
    done = 0
    block = 0
    while done < cfg.rounds:
        n = min(BLOCK, cfg.rounds - done)
        draws = []
        for which in (0, 1):
            rng = _block_rng(cfg.seed, which, block)
            actions = _draw_actions(rng, cums[which], n)
            draws.append(_payoff_draws(rng, g, cfg.player_under_test, actions))
        wins += int((draws[0] > draws[1]).sum())
        ties += int((draws[0] == draws[1]).sum())
        done += n
        block += 1
    return SimReport(cfg.rounds, wins, ties)


def indifference_test(
    g: StochasticGame,
    p: MixedProfile,
    responder: int,
    *,
    rounds: int = 10**6,
    seed: int = 0,
) -> SimReport:
    """Same-randomness check: per round the opponents' pure profile is drawn
    once from p and both responder actions are paid under it; reports how
    often the first action pays strictly more than the second."""
    if len(g.strategies[responder]) != 2:
        raise ValueError("responder needs exactly 2 strategies")
    opp_cums = [
        np.minimum(np.cumsum(p.vector(j)), 1.0)
        for j in range(g.n_players)
        if j != responder
    ]
    wins = 0
    ties = 0
    done = 0
    block = 0
    while done < rounds:
        n = min(BLOCK, rounds - done)
        rng = _block_rng(seed, 0, block)
        frags = _draw_actions(rng, opp_cums, n)
        payoffs = []
        for action in (0, 1):
            actions = np.insert(frags, responder, action, axis=1)
            payoffs.append(_payoff_draws(rng, g, responder, actions))
        wins += int((payoffs[0] > payoffs[1]).sum())
        ties += int((payoffs[0] == payoffs[1]).sum())
        done += n
        block += 1
    return SimReport(rounds, wins, ties)


def sweep(
    builder: Callable[[float], StochasticGame],
    params: Iterable[float],
    experiment: Callable[[StochasticGame, float], list[dict]],
) -> list[dict]:
    """Run an experiment per parameter value; one output row per result."""
    rows: list[dict] = []
    for value in params:
        g = builder(value)
        for row in experiment(g, value):
            rows.append({"param": value, **row})
    return rows


def param_seed(seed: int, value: float, salt: int = 0) -> int:
    """Stable per-parameter sub-seed: identical (seed, value) gives
    identical streams no matter where the value sits in the sweep."""
    bits = int(np.float64(value).view(np.uint64))
    ss = np.random.SeedSequence(
        entropy=(int(seed) & 0xFFFFFFFFFFFFFFFF, bits, salt)
    )
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _label(g: StochasticGame, r: EquilibriumResult) -> str:
    if r.kind is Kind.PURE:
        return f"{r.concept.value}({','.join(g.profile_labels(r.profile))})"
    return f"{r.concept.value}-mixed"


def rae_nash_comparison_rows(
    g: StochasticGame,
    *,
    rounds: int,
    seed: int,
    player: int = 0,
) -> list[dict]:
    """Rows comparing risk-averse against Nash play for one player.

    Each pure Nash equilibrium that differs from the reference pure
    risk-averse equilibrium yields one row, plus a mixed-vs-mixed row when
    both mixed equilibria exist (2-player games).
    """
    t = build_tensor(g)
    e = expected_tensor(g)
    prae = pure_equilibria(t.values, Concept.RAE)
    pnash = pure_equilibria(e, Concept.NASH)
    rows = []
    pairs: list[tuple[EquilibriumResult, EquilibriumResult]] = []
    if prae:
        ref = prae[0]
        pairs.extend((ref, ne) for ne in pnash if ne.profile != ref.profile)
    if g.n_players == 2:
        mrae = mixed_equilibria_2p(t.player_matrix(0), t.player_matrix(1), Concept.RAE)
        mnash = mixed_equilibria_2p(e[0], e[1], Concept.NASH)
        if mrae and mnash:
            pairs.append((mrae[0], mnash[0]))
    for idx, (ra, nb) in enumerate(pairs):
        cfg = SimConfig(rounds, param_seed(seed, 0.0, salt=idx), player, (ra, nb))
        rep = compare_equilibria(g, cfg)
        rows.append(
            {
                "concept_a": _label(g, ra),
                "concept_b": _label(g, nb),
                "rounds": rep.rounds,
                "wins": rep.wins,
                "ties": rep.ties,
                "proportion": rep.proportion,
                "ci3": rep.confidence_halfwidth,
            }
        )
    return rows


def indifference_rows(
    g: StochasticGame,
    *,
    rounds: int,
    seed: int,
    responder: int = 1,
    profile: MixedProfile | None = None,
    label: str = "RAE-mixed",
) -> list[dict]:
    """Row for the same-randomness indifference experiment under a mixed
    profile (the computed mixed risk-averse equilibrium by default)."""
    if profile is None:
        t = build_tensor(g)
        mixed = mixed_equilibria_2p(t.player_matrix(0), t.player_matrix(1), Concept.RAE)
        if not mixed:
            return []
        profile = mixed[0].profile
    rep = indifference_test(g, profile, responder, rounds=rounds, seed=seed)
    first, second = g.strategies[responder].labels[:2]
    return [
        {
            "concept_a": f"{label}:{first}",
            "concept_b": f"{label}:{second}",
            "rounds": rep.rounds,
            "wins": rep.wins,
            "ties": rep.ties,
            "proportion": rep.proportion,
            "ci3": rep.confidence_halfwidth,
        }
    ]
