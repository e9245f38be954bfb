"""Shared fixtures: example games, random game corpora, and independent
oracles (enumeration over atom supports, scipy quadrature) used to check
the package's own computational paths."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from riskgames import StochasticGame, StrategySet, build_payoff
from riskgames.examples import example1, example2, example4, remark_atoms


@pytest.fixture(scope="session")
def ex1():
    return example1()


@pytest.fixture(scope="session")
def ex2():
    return example2()


@pytest.fixture(scope="session")
def remark():
    return remark_atoms()


@pytest.fixture(scope="session")
def ex4():
    return example4


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def enum_prob_max(candidate: int, atom_dists: list[list[tuple[float, float]]]) -> float:
    """Exact win probability for atom-only families by joint enumeration,
    splitting k-way ties as 1/k. Independent of the package implementation."""
    total = 0.0
    for combo in itertools.product(*atom_dists):
        weight = math.prod(p for _, p in combo)
        values = [v for v, _ in combo]
        top = max(values)
        winners = [j for j, v in enumerate(values) if v == top]
        if candidate in winners:
            total += weight / len(winners)
    return total


def atoms_of(dist) -> list[tuple[float, float]]:
    return [(a.value, a.prob) for a in dist.atoms]


def brute_force_pure_equilibria(values: np.ndarray) -> set[tuple[int, ...]]:
    """Definition-level scan: a profile survives when no player has a
    strictly better own deviation."""
    n_players = values.shape[0]
    shape = values.shape[1:]
    found = set()
    for s in itertools.product(*(range(n) for n in shape)):
        ok = True
        for i in range(n_players):
            for d in range(shape[i]):
                alt = s[:i] + (d,) + s[i + 1 :]
                if values[(i, *alt)] > values[(i, *s)] + 1e-9:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.add(s)
    return found


# ---------------------------------------------------------------------------
# Random corpora
# ---------------------------------------------------------------------------


def random_atom_game(rng: np.random.Generator, shape=(2, 2)) -> StochasticGame:
    """Random discrete-payoff game on small integer values (ties likely)."""
    strategies = tuple(
        StrategySet(i, tuple(f"s{i}{a}" for a in range(n))) for i, n in enumerate(shape)
    )
    payoffs = {}
    for i in range(len(shape)):
        for s in itertools.product(*(range(n) for n in shape)):
            values = rng.choice(5, size=rng.integers(1, 4), replace=False)
            probs = rng.dirichlet(np.ones(len(values)))
            payoffs[(i, s)] = build_payoff(
                atoms=[(float(v), float(p)) for v, p in zip(values, probs)]
            )
    return StochasticGame(strategies, payoffs)


def random_continuous_game(rng: np.random.Generator, shape=(2, 2)) -> StochasticGame:
    """Random truncated-Gaussian-mixture game; generic with probability 1."""
    strategies = tuple(
        StrategySet(i, tuple(f"s{i}{a}" for a in range(n))) for i, n in enumerate(shape)
    )
    payoffs = {}
    for i in range(len(shape)):
        for s in itertools.product(*(range(n) for n in shape)):
            comps = []
            for _ in range(rng.integers(1, 3)):
                center = rng.uniform(0.0, 10.0)
                width = rng.uniform(0.5, 1.5)
                comps.append(
                    (
                        rng.uniform(0.5, 3.0),
                        center,
                        rng.uniform(5.0, 40.0),
                        center - width / 2.0,
                        center + width / 2.0,
                    )
                )
            payoffs[(i, s)] = build_payoff(components=comps)
    return StochasticGame(strategies, payoffs)
