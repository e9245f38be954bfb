"""Payoff random variables and probability-of-maximum integrals.

A payoff is a mixture of truncated-Gaussian components and discrete atoms.
Distributions are immutable once normalized and every operation here is a
pure function, so values are safe to share across threads; sampling takes an
explicit numpy Generator.

``prob_max`` computes the probability that one member of an independent
family draws the largest value, splitting exact atom ties uniformly among
the tying members so the per-family values always sum to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from itertools import combinations
from typing import Sequence, Union

import numpy as np
from scipy.special import erf, ndtri

from .errors import GridTooCoarse, NotNormalized, ZeroMass
from .quadrature import integrate_pieces

_SQRT_PI = math.sqrt(math.pi)

MASS_TOL = 1e-9          # |total mass - 1| allowed for a normalized distribution
QUAD_TOL = 1e-9          # default quadrature tolerance for prob_max
MIN_CELLS_PER_WINDOW = 16


@dataclass(frozen=True)
class GaussComponent:
    """One truncated bell curve ``weight * exp(-rate*(u-center)^2)`` on [lo, hi]."""

    weight: float
    center: float
    rate: float
    lo: float
    hi: float

    def __post_init__(self):
        if not self.weight > 0:
            raise ValueError(f"component weight must be positive, got {self.weight}")
        if not self.rate > 0:
            raise ValueError(f"component rate must be positive, got {self.rate}")
        if not self.lo < self.hi:
            raise ValueError(f"component window requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def mass(self) -> float:
        return float(self.cdf_part(self.hi))

    def pdf_part(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        return self.weight * np.exp(-self.rate * (x - self.center) ** 2) * inside

    def cdf_part(self, x: np.ndarray) -> np.ndarray:
        """weight * integral of the bell curve from lo to min(x, hi)."""
        s = math.sqrt(self.rate)
        xc = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        lo_t = erf(s * (self.lo - self.center))
        return self.weight * _SQRT_PI / (2.0 * s) * (erf(s * (xc - self.center)) - lo_t)

    def mean_part(self) -> float:
        """weight * integral of u * exp(-rate*(u-center)^2) over the window."""
        r, c = self.rate, self.center
        e_lo = math.exp(-r * (self.lo - c) ** 2)
        e_hi = math.exp(-r * (self.hi - c) ** 2)
        return c * self.mass() + self.weight * (e_lo - e_hi) / (2.0 * r)

    def sqmean_part(self) -> float:
        """weight * integral of u^2 * exp(-rate*(u-center)^2) over the window."""
        r, c = self.rate, self.center
        lo_t, hi_t = self.lo - c, self.hi - c
        e_lo = math.exp(-r * lo_t**2)
        e_hi = math.exp(-r * hi_t**2)
        i0 = self.mass()
        j1 = self.weight * (e_lo - e_hi) / (2.0 * r)
        k2 = self.weight * (lo_t * e_lo - hi_t * e_hi) / (2.0 * r) + i0 / (2.0 * r)
        return c * c * i0 + 2.0 * c * j1 + k2


@dataclass(frozen=True)
class Atom:
    """Point mass at ``value`` with probability ``prob``."""

    value: float
    prob: float

    def __post_init__(self):
        if not self.prob > 0:
            raise ValueError(f"atom probability must be positive, got {self.prob}")
        if not math.isfinite(self.value):
            raise ValueError(f"atom value must be finite, got {self.value}")


@dataclass(frozen=True)
class PayoffDistribution:
    """Mixture of truncated-Gaussian components and discrete atoms."""

    components: tuple[GaussComponent, ...] = ()
    atoms: tuple[Atom, ...] = ()
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.components and not self.atoms:
            raise ValueError("distribution needs at least one component or atom")

    # -- normalization ----------------------------------------------------

    def total_mass(self) -> float:
        return sum(k.mass() for k in self.components) + sum(a.prob for a in self.atoms)

    def normalize(self) -> "PayoffDistribution":
        """Rescale so total mass is 1, preserving weight and probability ratios.

        Duplicate component windows and duplicate atom values are merged so
        the result is canonical; normalize is idempotent.
        """
        comps = _merge_components(self.components)
        atoms = _merge_atoms(self.atoms)
        total = sum(k.mass() for k in comps) + sum(a.prob for a in atoms)
        if not total > 0 or not math.isfinite(total):
            raise ZeroMass(f"cannot normalize distribution with total mass {total}")
        comps = tuple(replace(k, weight=k.weight / total) for k in comps)
        atoms = tuple(Atom(a.value, a.prob / total) for a in atoms)
        return PayoffDistribution(comps, atoms, normalized=True)

    def _require_normalized(self):
        if not self.normalized:
            raise NotNormalized("operation requires a normalized distribution")

    # -- densities ---------------------------------------------------------

    def pdf(self, x) -> np.ndarray:
        """Continuous density at x (atoms carry no density)."""
        self._require_normalized()
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k in self.components:
            out += k.pdf_part(x)
        return out if out.ndim else float(out)

    def cdf(self, x) -> np.ndarray:
        """P(U <= x), including atom mass at values <= x."""
        self._require_normalized()
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k in self.components:
            out += k.cdf_part(x)
        vals, probs = self._atom_arrays
        if vals.size:
            idx = np.searchsorted(vals, x, side="right")
            out += np.concatenate(([0.0], np.cumsum(probs)))[idx]
        return out if out.ndim else float(out)

    def mean(self) -> float:
        self._require_normalized()
        total = sum(k.mean_part() for k in self.components)
        total += sum(a.value * a.prob for a in self.atoms)
        return total

    def variance(self) -> float:
        self._require_normalized()
        sq = sum(k.sqmean_part() for k in self.components)
        sq += sum(a.value**2 * a.prob for a in self.atoms)
        m = self.mean()
        return sq - m * m

    # -- sampling ----------------------------------------------------------

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw from the distribution; scalar when size is None."""
        self._require_normalized()
        n = 1 if size is None else int(size)
        parts = self.components + self.atoms
        masses = np.array(
            [k.mass() for k in self.components] + [a.prob for a in self.atoms]
        )
        masses = masses / masses.sum()
        choice = rng.choice(len(parts), size=n, p=masses)
        out = np.empty(n, dtype=float)
        for idx, part in enumerate(parts):
            sel = choice == idx
            cnt = int(sel.sum())
            if cnt == 0:
                continue
            if isinstance(part, Atom):
                out[sel] = part.value
            else:
                sd = 1.0 / math.sqrt(2.0 * part.rate)
                a = _phi((part.lo - part.center) / sd)
                b = _phi((part.hi - part.center) / sd)
                u = rng.random(cnt)
                out[sel] = part.center + sd * ndtri(a + u * (b - a))
        return out if size is not None else float(out[0])

    # -- internals ---------------------------------------------------------

    @cached_property
    def _atom_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.atoms:
            return np.empty(0), np.empty(0)
        order = sorted(self.atoms, key=lambda a: a.value)
        return (
            np.array([a.value for a in order]),
            np.array([a.prob for a in order]),
        )

    @cached_property
    def _windows(self) -> tuple[tuple[float, float], ...]:
        return tuple((k.lo, k.hi) for k in self.components)

    def support_bounds(self) -> tuple[float, float]:
        lo = min(
            [k.lo for k in self.components] + [a.value for a in self.atoms]
        )
        hi = max(
            [k.hi for k in self.components] + [a.value for a in self.atoms]
        )
        return lo, hi


def _phi(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def _merge_components(comps: Sequence[GaussComponent]) -> tuple[GaussComponent, ...]:
    merged: dict[tuple[float, float, float, float], float] = {}
    for k in comps:
        key = (k.center, k.rate, k.lo, k.hi)
        merged[key] = merged.get(key, 0.0) + k.weight
    return tuple(
        GaussComponent(w, c, r, lo, hi)
        for (c, r, lo, hi), w in sorted(merged.items(), key=lambda kv: kv[0])
    )


def _merge_atoms(atoms: Sequence[Atom]) -> tuple[Atom, ...]:
    merged: dict[float, float] = {}
    for a in atoms:
        merged[a.value] = merged.get(a.value, 0.0) + a.prob
    return tuple(Atom(v, p) for v, p in sorted(merged.items()))


def build_payoff(components=(), atoms=()) -> PayoffDistribution:
    """Build and normalize a distribution from (weight, center, rate, lo, hi)
    component tuples and (value, prob) atom tuples."""
    return PayoffDistribution(
        tuple(GaussComponent(*c) for c in components),
        tuple(Atom(*a) for a in atoms),
    ).normalize()


# ---------------------------------------------------------------------------
# Grid densities (carriers for convolution results)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridDensity:
    """Probability mass on a uniform grid; cell k sits at ``x0 + k*dx``.

    Used as the numerical carrier for repeated self-convolutions. For
    probability-of-maximum purposes each cell is treated as an atom at its
    midpoint; for cdf queries the cell mass is spread uniformly over the
    cell, which keeps the cdf exact at cell edges.
    """

    x0: float
    dx: float
    mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mass", np.asarray(self.mass, dtype=float))
        if self.dx <= 0:
            raise ValueError("grid step must be positive")
        if self.mass.ndim != 1 or self.mass.size == 0:
            raise ValueError("mass must be a nonempty 1-D array")
        if np.any(self.mass < -1e-12):
            raise ValueError("mass must be nonnegative")
        if abs(self.mass.sum() - 1.0) > 1e-6:
            raise ValueError(f"grid mass must sum to 1, got {self.mass.sum()}")

    @property
    def n(self) -> int:
        return self.mass.size

    @cached_property
    def midpoints(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @cached_property
    def _edges_cum(self) -> tuple[np.ndarray, np.ndarray]:
        edges = self.x0 - self.dx / 2.0 + self.dx * np.arange(self.n + 1)
        cum = np.concatenate(([0.0], np.cumsum(self.mass)))
        return edges, cum

    def cdf(self, x) -> np.ndarray:
        edges, cum = self._edges_cum
        out = np.interp(np.asarray(x, dtype=float), edges, cum, left=0.0, right=cum[-1])
        return out if out.ndim else float(out)

    def mean(self) -> float:
        return float(self.midpoints @ self.mass)

    def variance(self) -> float:
        m = self.mean()
        return float(((self.midpoints - m) ** 2) @ self.mass)

    def support_bounds(self) -> tuple[float, float]:
        return float(self.midpoints[0]), float(self.midpoints[-1])


Distribution = Union[PayoffDistribution, GridDensity]


def default_grid_step(d: PayoffDistribution) -> float:
    """Default convolution step: narrowest component window over 64 cells."""
    if d.components:
        return min(k.width for k in d.components) / 64.0
    vals = np.sort(np.array([a.value for a in d.atoms]))
    if vals.size > 1:
        return float(np.diff(vals).min()) / 4.0
    return 1.0


def discretize(d: PayoffDistribution, x0: float, dx: float, n: int) -> GridDensity:
    """Project a distribution onto a uniform grid of n cells starting at x0.

    Component mass per cell is the exact window integral between cell edges;
    atoms are deposited onto the two nearest midpoints with linear weights so
    the grid mean matches the atom value exactly.
    """
    d._require_normalized()
    for k in d.components:
        if k.width / dx < MIN_CELLS_PER_WINDOW:
            raise GridTooCoarse(
                f"grid step {dx} gives {k.width / dx:.1f} cells for window "
                f"[{k.lo}, {k.hi}]; need >= {MIN_CELLS_PER_WINDOW}"
            )
    edges = x0 - dx / 2.0 + dx * np.arange(n + 1)
    mass = np.zeros(n)
    for k in d.components:
        part = k.cdf_part(edges)
        mass += np.diff(part)
    for a in d.atoms:
        pos = (a.value - x0) / dx
        k0 = int(np.clip(math.floor(pos), 0, n - 1))
        k1 = min(k0 + 1, n - 1)
        frac = pos - k0 if k1 > k0 else 0.0
        mass[k0] += a.prob * (1.0 - frac)
        mass[k1] += a.prob * frac
    mass = np.clip(mass, 0.0, None)
    total = mass.sum()
    if not total > 0:
        raise ZeroMass("no mass landed on the grid")
    return GridDensity(x0, dx, mass / total)


def convolve_grid_power(g: GridDensity, m: int) -> GridDensity:
    """M-fold self-convolution of a grid density via an FFT power."""
    if m < 1:
        raise ValueError("convolution power must be >= 1")
    if m == 1 or g.n == 1:
        return GridDensity(g.x0 * m, g.dx, g.mass.copy())
    out_len = m * (g.n - 1) + 1
    spec = np.fft.rfft(g.mass, out_len) ** m
    mass = np.fft.irfft(spec, out_len)
    mass = np.clip(mass, 0.0, None)
    return GridDensity(g.x0 * m, g.dx, mass / mass.sum())


def convolve_power(
    d: PayoffDistribution, m: int, grid_step: float | None = None
) -> GridDensity:
    """Grid approximation of the distribution of a sum of m iid draws."""
    d._require_normalized()
    if m < 1:
        raise ValueError("convolution power must be >= 1")
    dx = grid_step if grid_step is not None else default_grid_step(d)
    lo, hi = d.support_bounds()
    n = max(2, int(math.ceil((hi - lo) / dx)) + 1)
    return convolve_grid_power(discretize(d, lo, dx, n), m)


# ---------------------------------------------------------------------------
# Probability of drawing the maximum
# ---------------------------------------------------------------------------


def _check_normalized(d: Distribution):
    if isinstance(d, PayoffDistribution):
        d._require_normalized()


def _discrete_arrays(d: Distribution) -> tuple[np.ndarray, np.ndarray]:
    """Sorted (values, probs) of the discrete part (grid cells count as atoms)."""
    if isinstance(d, GridDensity):
        return d.midpoints, d.mass
    return d._atom_arrays


def _full_cdf(d: Distribution, x: np.ndarray) -> np.ndarray:
    return np.asarray(d.cdf(x), dtype=float)


def _below_and_at(d: Distribution, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(P(X < x), P(X = x)) evaluated elementwise; equality is exact."""
    vals, probs = _discrete_arrays(d)
    x = np.asarray(x, dtype=float)
    if vals.size:
        idx = np.searchsorted(vals, x, side="left")
        clipped = np.minimum(idx, vals.size - 1)
        hit = (idx < vals.size) & (vals[clipped] == x)
        eq = np.where(hit, probs[clipped], 0.0)
    else:
        idx = np.zeros(x.shape, dtype=int)
        eq = np.zeros_like(x)
    if isinstance(d, GridDensity):
        _, cum = d._edges_cum
        below = cum[idx]
    else:
        below = _full_cdf(d, x) - eq
    return below, eq


def _tie_split_credit(
    below: list[np.ndarray], at: list[np.ndarray]
) -> np.ndarray:
    """E[1/(1+T) * 1{all others <= x}] where T counts others exactly at x."""
    k = len(below)
    credit = np.zeros_like(below[0])
    for size in range(k + 1):
        share = 1.0 / (1.0 + size)
        tied_sets = combinations(range(k), size)
        for tied in tied_sets:
            term = np.full_like(below[0], share)
            for j in range(k):
                term = term * (at[j] if j in tied else below[j])
            credit += term
    return credit


def prob_max(
    candidate: int,
    family: Sequence[Distribution],
    *,
    quad_tol: float = QUAD_TOL,
) -> float:
    """P(draw from family[candidate] >= independent draws from all others).

    Continuous mass is integrated as pdf_c(x) * prod of the others' cdfs;
    exact atom ties are split uniformly among the tying members, so summing
    over candidates always gives 1.
    """
    members = list(family)
    for d in members:
        _check_normalized(d)
    if not 0 <= candidate < len(members):
        raise IndexError(f"candidate {candidate} outside family of {len(members)}")
    if len(members) == 1:
        return 1.0
    cand = members[candidate]
    others = [d for j, d in enumerate(members) if j != candidate]

    total = 0.0

    vals, probs = _discrete_arrays(cand)
    if vals.size:
        below = []
        at = []
        for d in others:
            b, e = _below_and_at(d, vals)
            below.append(b)
            at.append(e)
        total += float(probs @ _tie_split_credit(below, at))

    if isinstance(cand, PayoffDistribution) and cand.components:
        breaks: list[float] = []
        for lo, hi in cand._windows:
            breaks.extend((lo, hi))
        for d in others:
            if isinstance(d, PayoffDistribution):
                for k in d.components:
                    breaks.extend((k.lo, k.hi))
                av, _ = d._atom_arrays
                breaks.extend(av.tolist())

        def integrand(x: np.ndarray) -> np.ndarray:
            out = cand.pdf(x)
            for d in others:
                out = out * _full_cdf(d, x)
            return out

        for lo, hi in cand._windows:
            inner = [p for p in breaks if lo < p < hi]
            total += integrate_pieces(integrand, [lo, *inner, hi], tol=quad_tol)

    return float(min(max(total, 0.0), 1.0))
