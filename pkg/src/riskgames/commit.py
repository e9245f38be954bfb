"""M-time commit games: every payoff becomes an M-fold self-convolution.

Players commit to one pure action for all M rounds, so the relevant payoff
is the M-round sum. All convolved payoffs of a game share one grid (same
origin and step) so best-payoff comparisons align cell to cell; cell ties
are a grid artifact, so the tensor build can halve the step until entries
stabilize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .dist import GridDensity, convolve_grid_power, discretize
from .equilibrium import Concept, EquilibriumResult, mixed_equilibria_2p, pure_equilibria
from .game import PureProfile, StochasticGame
from .tensor import ProbabilityTensor, build_tensor

REFINE_TOL = 1e-3


@dataclass(frozen=True, eq=False)
class CommitGame:
    """A base game plus its M-round summed payoffs on a shared grid."""

    base: StochasticGame
    m: int
    payoffs: Mapping[tuple[int, PureProfile], GridDensity]
    grid_step: float

    @property
    def strategies(self):
        return self.base.strategies

    @property
    def shape(self):
        return self.base.shape

    @property
    def n_players(self):
        return self.base.n_players

    def payoff(self, i: int, s: PureProfile) -> GridDensity:
        return self.payoffs[(i, tuple(s))]


def _shared_grid(g: StochasticGame, grid_step: float | None) -> tuple[float, float, int]:
    """Common (x0, dx, n) covering the support of every payoff in the game."""
    lo = math.inf
    hi = -math.inf
    narrowest = math.inf
    has_components = False
    atom_vals: list[float] = []
    for d in g.payoffs.values():
        b0, b1 = d.support_bounds()
        lo, hi = min(lo, b0), max(hi, b1)
        for k in d.components:
            has_components = True
            narrowest = min(narrowest, k.width)
        atom_vals.extend(a.value for a in d.atoms)
    if grid_step is not None:
        dx = grid_step
    elif has_components:
        dx = narrowest / 64.0
    else:
        gaps = np.diff(np.unique(np.asarray(atom_vals)))
        dx = float(gaps.min()) / 4.0 if gaps.size else 1.0
    n = max(2, int(math.ceil((hi - lo) / dx)) + 1)
    return lo, dx, n


def commit_game(g: StochasticGame, m: int, grid_step: float | None = None) -> CommitGame:
    """Replace every payoff with its M-fold self-convolution on a shared grid."""
    if m < 1:
        raise ValueError("commit length must be >= 1")
    x0, dx, n = _shared_grid(g, grid_step)
    payoffs = {
        key: convolve_grid_power(discretize(d, x0, dx, n), m)
        for key, d in g.payoffs.items()
    }
    return CommitGame(g, m, payoffs, dx)


def commit_tensor(
    cg: CommitGame,
    *,
    refine_tol: float = REFINE_TOL,
    max_refinements: int = 3,
) -> ProbabilityTensor:
    """Best-payoff probability tensor of a commit game.

    The grid step is halved until no tensor entry moves by more than
    refine_tol, bounding the discretization error from cell ties.
    """
    current = cg
    t = build_tensor(current)
    for _ in range(max_refinements):
        finer = commit_game(cg.base, cg.m, current.grid_step / 2.0)
        t2 = build_tensor(finer)
        if np.max(np.abs(t2.values - t.values)) < refine_tol:
            return t2
        current, t = finer, t2
    return t


def solve_commit(cg: CommitGame, *, kind: str = "all") -> list[EquilibriumResult]:
    """Pure (any N) and mixed (2-player) equilibria of the commit game."""
    t = commit_tensor(cg)
    results: list[EquilibriumResult] = []
    if kind in ("pure", "all"):
        results.extend(pure_equilibria(t.values, Concept.RAE_M))
    if kind in ("mixed", "all") and cg.n_players == 2:
        results.extend(
            mixed_equilibria_2p(t.player_matrix(0), t.player_matrix(1), Concept.RAE_M)
        )
    return results
