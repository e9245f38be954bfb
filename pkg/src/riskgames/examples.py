"""Builders for the games shipped with the package.

These load the ``.game`` files bundled under ``riskgames/data`` so the
programmatic API and the CLI see the exact same games.
"""

from __future__ import annotations

import json
from importlib import resources

from .game import StochasticGame
from .gamefile import load_game


def _load(name: str, params=None) -> StochasticGame:
    text = resources.files("riskgames.data").joinpath(name).read_text()
    return load_game(json.loads(text), params)


def example1() -> StochasticGame:
    """2x2 game with one pure risk-averse equilibrium distinct from both
    pure Nash equilibria."""
    return _load("example1.game")


def example2() -> StochasticGame:
    """2x2 game with two pure and one mixed risk-averse equilibrium but a
    single pure Nash equilibrium."""
    return _load("example2.game")


def example4(a: float) -> StochasticGame:
    """Parameterized 2x2 game whose Nash set depends on the shift ``a``
    while the risk-averse equilibria stay put."""
    return _load("example4.game", {"a": a})


def remark_atoms() -> StochasticGame:
    """One-player game with the three discrete payoffs used to illustrate
    uniform tie-splitting."""
    return _load("remark_atoms.game")
