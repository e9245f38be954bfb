"""Equilibrium computation on per-player payoff tensors.

The same machinery serves two concepts: Nash equilibria of the expected
payoff tensor and risk-averse equilibria as Nash equilibria of the
best-payoff probability tensor. Pure profiles are found by exhaustive
enumeration; 2-player mixed profiles by support enumeration over the
opponent-indifference linear systems.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DegenerateSupportWarning
from .game import MixedProfile, PureProfile, StochasticGame
from .tensor import ProbabilityTensor, build_tensor

BR_TOL = 1e-6            # best-response slack when validating mixed solutions
SUPPORT_TOL = 1e-9       # nonzero-probability threshold defining a support
DOMINANCE_MARGIN = 1e-9  # strictness margin for dominance
DEDUP_TOL = 1e-7


class Concept(str, Enum):
    NASH = "NASH"
    RAE = "RAE"
    RAE2 = "RAE2"
    RAE_M = "RAE_M"


class Kind(str, Enum):
    PURE = "PURE"
    MIXED = "MIXED"


@dataclass(frozen=True)
class EquilibriumResult:
    """One equilibrium: the profile, its support, and per-player values.

    Values are expected payoffs for NASH and best-payoff probabilities for
    the risk-averse concepts.
    """

    concept: Concept
    kind: Kind
    profile: PureProfile | MixedProfile
    support: tuple[tuple[int, ...], ...]
    values: tuple[float, ...]
    notes: tuple[str, ...] = ()


def pure_result(concept: Concept, profile: PureProfile, values) -> EquilibriumResult:
    return EquilibriumResult(
        concept,
        Kind.PURE,
        tuple(profile),
        tuple((a,) for a in profile),
        tuple(float(v) for v in values),
    )


def mixed_result(
    concept: Concept, profile: MixedProfile, values, notes=()
) -> EquilibriumResult:
    return EquilibriumResult(
        concept,
        Kind.MIXED,
        profile,
        profile.support(SUPPORT_TOL),
        tuple(float(v) for v in values),
        tuple(notes),
    )


def pure_equilibria(
    values: np.ndarray | ProbabilityTensor,
    concept: Concept,
    *,
    tie_tol: float = SUPPORT_TOL,
) -> list[EquilibriumResult]:
    """All pure profiles where no player gains by a unilateral deviation.

    ``values`` holds one payoff tensor per player, shape (N, *game shape);
    ties count as best responses. May be empty for probability tensors.
    """
    vals = values.values if isinstance(values, ProbabilityTensor) else np.asarray(values)
    n_players = vals.shape[0]
    shape = vals.shape[1:]
    results = []
    for s in np.ndindex(*shape):
        if all(
            vals[(i, *s)] >= vals[i][s[:i] + (slice(None),) + s[i + 1 :]].max() - tie_tol
            for i in range(n_players)
        ):
            results.append(pure_result(concept, s, [vals[(i, *s)] for i in range(n_players)]))
    return results


def _solve_support_system(m: np.ndarray, rhs: np.ndarray):
    """Solve the stacked indifference + normalization system.

    Returns (solution, note) or (None, reason). Square systems are solved
    exactly; rectangular ones by least squares with a residual check.
    Singular or underdetermined systems are the degenerate cases the caller
    reports and skips.
    """
    rows, cols = m.shape
    if rows == cols:
        try:
            x = np.linalg.solve(m, rhs)
        except np.linalg.LinAlgError:
            return None, "singular"
        if not np.all(np.isfinite(x)):
            return None, "singular"
        return x, None
    x, _, rank, _ = np.linalg.lstsq(m, rhs, rcond=None)
    if rank < cols:
        return None, "underdetermined"
    if np.max(np.abs(m @ x - rhs)) > 1e-9:
        return None, "inconsistent"
    return x, None


def mixed_equilibria_2p(
    mat_a: np.ndarray,
    mat_b: np.ndarray,
    concept: Concept,
    *,
    br_tol: float = BR_TOL,
    dedup_tol: float = DEDUP_TOL,
) -> list[EquilibriumResult]:
    """Mixed equilibria of a 2-player bimatrix by support enumeration.

    For each support pair, the opponent indifference equations plus
    normalization pin the mixtures; solutions are kept when probabilities
    are nonnegative, the support matches, and no outside action does
    better. Both-singleton supports are pure and left to pure_equilibria.
    Singular supports are skipped with a DegenerateSupportWarning.
    """
    a = np.asarray(mat_a, dtype=float)
    b = np.asarray(mat_b, dtype=float)
    if a.shape != b.shape or a.ndim != 2:
        raise ValueError("need two equally shaped payoff matrices")
    n1, n2 = a.shape
    results: list[EquilibriumResult] = []

    for total in range(3, n1 + n2 + 1):
        for k1 in range(max(1, total - n2), min(n1, total - 1) + 1):
            k2 = total - k1
            for rows in combinations(range(n1), k1):
                for cols in combinations(range(n2), k2):
                    res = _try_support(a, b, rows, cols, concept, br_tol)
                    if res is None:
                        continue
                    if any(
                        _profile_distance(res.profile, prev.profile) < dedup_tol
                        for prev in results
                    ):
                        continue
                    results.append(res)
    return results


def _try_support(a, b, rows, cols, concept, br_tol):
    n1, n2 = a.shape
    # player 1 indifferent among `rows` pins sigma_2 on `cols`, and vice versa
    m2 = np.vstack(
        [a[rows[0], list(cols)] - a[r, list(cols)] for r in rows[1:]]
        + [np.ones(len(cols))]
    )
    m1 = np.vstack(
        [b[list(rows), cols[0]] - b[list(rows), c] for c in cols[1:]]
        + [np.ones(len(rows))]
    )
    rhs2 = np.zeros(len(rows))
    rhs2[-1] = 1.0
    rhs1 = np.zeros(len(cols))
    rhs1[-1] = 1.0

    sig2, reason2 = _solve_support_system(m2, rhs2)
    sig1, reason1 = _solve_support_system(m1, rhs1)
    if "inconsistent" in (reason1, reason2):
        return None  # generic failure: no equilibrium with this support
    for reason in (reason1, reason2):
        if reason in ("singular", "underdetermined"):
            warnings.warn(
                f"support {rows}x{cols}: {reason} indifference system, skipped",
                DegenerateSupportWarning,
                stacklevel=3,
            )
            return None
    if sig1 is None or sig2 is None:
        return None

    full1 = np.zeros(n1)
    full1[list(rows)] = sig1
    full2 = np.zeros(n2)
    full2[list(cols)] = sig2
    for full in (full1, full2):
        if np.any(full < -SUPPORT_TOL):
            return None
        np.clip(full, 0.0, None, out=full)
        full /= full.sum()
    if np.any(full1[list(rows)] <= SUPPORT_TOL) or np.any(full2[list(cols)] <= SUPPORT_TOL):
        return None  # collapsed onto a smaller support; found there instead

    v1 = a @ full2
    v2 = full1 @ b
    if np.ptp(v1[list(rows)]) > br_tol or np.ptp(v2[list(cols)]) > br_tol:
        return None
    if v1.max() > v1[rows[0]] + br_tol or v2.max() > v2[cols[0]] + br_tol:
        return None

    profile = MixedProfile((tuple(full1), tuple(full2)))
    values = (float(full1 @ a @ full2), float(full1 @ b @ full2))
    return mixed_result(concept, profile, values)


def _profile_distance(p: MixedProfile, q: MixedProfile) -> float:
    return max(
        abs(x - y)
        for vp, vq in zip(p.weights, q.weights)
        for x, y in zip(vp, vq)
    )


def is_strictly_dominated(
    t: ProbabilityTensor | np.ndarray,
    i: int,
    s_i: int,
    *,
    margin: float = DOMINANCE_MARGIN,
) -> tuple[bool, int | None]:
    """Whether some own action beats s_i strictly for every opponent fragment.

    Returns (dominated, dominating strategy index or None).
    """
    vals = t.values if isinstance(t, ProbabilityTensor) else np.asarray(t)
    own = vals.shape[1:][i]
    mine = np.take(vals[i], s_i, axis=i)
    for d in range(own):
        if d == s_i:
            continue
        if np.all(np.take(vals[i], d, axis=i) > mine + margin):
            return True, d
    return False, None


@dataclass(frozen=True)
class Elimination:
    """One IESDS step: the removed strategy and what dominated it."""

    player: int
    strategy: str
    dominated_by: str


def iesds(
    g: StochasticGame, *, margin: float = DOMINANCE_MARGIN
) -> tuple[StochasticGame, tuple[Elimination, ...]]:
    """Iterated elimination of strictly dominated strategies.

    The probability tensor is rebuilt after every single elimination because
    the best-payoff probabilities depend on the surviving own-action set.
    """
    current = g
    trace: list[Elimination] = []
    while True:
        t = build_tensor(current)
        hit = None
        for i in range(current.n_players):
            for s_i in range(current.shape[i]):
                dominated, by = is_strictly_dominated(t, i, s_i, margin=margin)
                if dominated:
                    hit = (i, s_i, by)
                    break
            if hit:
                break
        if hit is None:
            return current, tuple(trace)
        i, s_i, by = hit
        trace.append(
            Elimination(i, current.strategies[i].labels[s_i], current.strategies[i].labels[by])
        )
        keep = [
            [a for a in range(n) if not (j == i and a == s_i)]
            for j, n in enumerate(current.shape)
        ]
        current = current.restrict(keep)
