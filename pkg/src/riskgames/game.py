"""Finite stochastic games: strategy sets, payoff tables, mixed profiles.

Strategies are indexed in declaration order everywhere; labels exist only
for I/O. Games and profiles are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping, Sequence

import numpy as np

from .dist import Atom, GaussComponent, PayoffDistribution
from .errors import MissingProfile, NotNormalized

PureProfile = tuple[int, ...]

PROB_TOL = 1e-9


@dataclass(frozen=True)
class StrategySet:
    """Ordered pure strategies of one player."""

    player: int
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError(f"player {self.player} has no strategies")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"player {self.player} has duplicate strategy labels")

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class MixedProfile:
    """One probability vector per player over that player's pure strategies."""

    weights: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "weights", tuple(tuple(float(w) for w in v) for v in self.weights)
        )
        for i, v in enumerate(self.weights):
            if any(w < -PROB_TOL for w in v):
                raise ValueError(f"player {i} mixture has negative weight: {v}")
            if abs(sum(v) - 1.0) > PROB_TOL:
                raise ValueError(f"player {i} mixture sums to {sum(v)}, not 1")

    @classmethod
    def pure(cls, shape: Sequence[int], profile: PureProfile) -> "MixedProfile":
        return cls(
            tuple(
                tuple(1.0 if a == s else 0.0 for a in range(n))
                for n, s in zip(shape, profile)
            )
        )

    @classmethod
    def uniform(cls, shape: Sequence[int]) -> "MixedProfile":
        return cls(tuple(tuple(1.0 / n for _ in range(n)) for n in shape))

    def vector(self, i: int) -> np.ndarray:
        return np.array(self.weights[i])

    def support(self, threshold: float = PROB_TOL) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(s for s, w in enumerate(v) if w > threshold) for v in self.weights
        )

    def is_pure(self, threshold: float = PROB_TOL) -> bool:
        return all(len(s) == 1 for s in self.support(threshold))

    def as_pure(self) -> PureProfile:
        sup = self.support()
        if any(len(s) != 1 for s in sup):
            raise ValueError("profile is not degenerate")
        return tuple(s[0] for s in sup)


@dataclass(frozen=True, eq=False)
class StochasticGame:
    """N players, finite strategy sets, one payoff distribution per (player, profile)."""

    strategies: tuple[StrategySet, ...]
    payoffs: Mapping[tuple[int, PureProfile], PayoffDistribution]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))
        object.__setattr__(self, "payoffs", dict(self.payoffs))
        if not self.names:
            object.__setattr__(
                self, "names", tuple(f"P{i + 1}" for i in range(len(self.strategies)))
            )
        if len(self.names) != len(self.strategies):
            raise ValueError("one name per player required")
        missing = [
            (self.names[i], self.profile_labels(s))
            for i in range(self.n_players)
            for s in self.pure_profiles()
            if (i, s) not in self.payoffs
        ]
        if missing:
            raise MissingProfile(missing)
        for key, d in self.payoffs.items():
            if not d.normalized:
                raise NotNormalized(f"payoff for {key} is not normalized")

    @property
    def n_players(self) -> int:
        return len(self.strategies)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.strategies)

    def pure_profiles(self) -> Iterator[PureProfile]:
        return product(*(range(n) for n in self.shape))

    def payoff(self, i: int, s: PureProfile) -> PayoffDistribution:
        return self.payoffs[(i, tuple(s))]

    def profile_labels(self, s: PureProfile) -> tuple[str, ...]:
        return tuple(self.strategies[j].labels[a] for j, a in enumerate(s))

    def restrict(self, keep: Sequence[Sequence[int]]) -> "StochasticGame":
        """Subgame on the kept strategy indices (declaration order preserved)."""
        keep = [tuple(k) for k in keep]
        strategies = tuple(
            StrategySet(i, tuple(self.strategies[i].labels[a] for a in keep[i]))
            for i in range(self.n_players)
        )
        payoffs = {}
        for i in range(self.n_players):
            for new_s in product(*(range(len(k)) for k in keep)):
                old_s = tuple(keep[j][a] for j, a in enumerate(new_s))
                payoffs[(i, new_s)] = self.payoff(i, old_s)
        return StochasticGame(strategies, payoffs, self.names)


def opponent_profiles(g: StochasticGame, i: int) -> list[tuple[int, ...]]:
    """All pure strategy choices of the players other than i, in lexicographic
    order; a 1-player game yields the single empty fragment."""
    sizes = [n for j, n in enumerate(g.shape) if j != i]
    return list(product(*(range(n) for n in sizes)))


def insert_action(fragment: tuple[int, ...], i: int, s_i: int) -> PureProfile:
    """Rebuild a full pure profile from an opponent fragment and own action."""
    return fragment[:i] + (s_i,) + fragment[i:]


def profile_weight(p: MixedProfile, i: int, fragment: tuple[int, ...]) -> float:
    """Probability the opponents of player i jointly play the fragment."""
    w = 1.0
    others = [j for j in range(len(p.weights)) if j != i]
    for j, a in zip(others, fragment):
        w *= p.weights[j][a]
    return w


def mixture_payoff(
    g: StochasticGame, i: int, s_i: int, p: MixedProfile
) -> PayoffDistribution:
    """Marginal payoff of player i playing s_i against the mixed profile p.

    The mixture reweights each pure-profile payoff by the opponents' joint
    probability; zero-weight fragments are dropped.
    """
    comps: list[GaussComponent] = []
    atoms: list[Atom] = []
    for frag in opponent_profiles(g, i):
        w = profile_weight(p, i, frag)
        if w <= 0.0:
            continue
        d = g.payoff(i, insert_action(frag, i, s_i))
        comps.extend(
            GaussComponent(k.weight * w, k.center, k.rate, k.lo, k.hi)
            for k in d.components
        )
        atoms.extend(Atom(a.value, a.prob * w) for a in d.atoms)
    return PayoffDistribution(tuple(comps), tuple(atoms)).normalize()


def expected_tensor(g: StochasticGame) -> np.ndarray:
    """Mean payoff of every player at every pure profile; shape (N, *game shape)."""
    out = np.empty((g.n_players, *g.shape))
    for i in range(g.n_players):
        for s in g.pure_profiles():
            out[(i, *s)] = g.payoff(i, s).mean()
    return out
