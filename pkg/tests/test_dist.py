import math

import numpy as np
import pytest
from scipy.integrate import quad

from riskgames.dist import (
    Atom,
    GaussComponent,
    GridDensity,
    PayoffDistribution,
    build_payoff,
    convolve_power,
    prob_max,
)
from riskgames.errors import GridTooCoarse, NotNormalized, ZeroMass

from conftest import atoms_of, enum_prob_max

# Example densities: bell curves with rate 20 on unit windows.
F3 = [(1, 3, 20, 2.5, 3.5)]
F4 = [(3, 2, 20, 1.5, 2.5), (2, 7, 20, 6.5, 7.5)]
F3HAT = [(3, 1, 20, 0.5, 1.5), (2, 6, 20, 5.5, 6.5)]
F5 = [(7, 2, 20, 1.5, 2.5), (3, 12, 20, 11.5, 12.5)]

# scipy.integrate.quad oracle values (see the inline checks below):
BETA = 2.5270884319577185  # normalized peak of F3


def _quad_mass(w, c, r, lo, hi):
    return quad(lambda x: w * math.exp(-r * (x - c) ** 2), lo, hi, epsabs=1e-13)[0]


class TestNormalize:
    def test_f3_unit_mass_and_mean(self):
        d = build_payoff(components=F3)
        assert abs(d.total_mass() - 1.0) < 1e-9
        assert abs(d.mean() - 3.0) < 1e-6

    def test_single_atom_rescaled(self):
        d = PayoffDistribution(atoms=(Atom(1.0, 0.5),)).normalize()
        assert d.atoms[0].prob == 1.0

    def test_f4_component_masses(self):
        # symmetric equal-width windows carry the 3:2 weight ratio
        d = build_payoff(components=F4)
        masses = [k.mass() for k in d.components]
        assert abs(masses[0] - 0.6) < 1e-6
        assert abs(masses[1] - 0.4) < 1e-6
        raw = [_quad_mass(*F4[0]), _quad_mass(*F4[1])]
        assert abs(masses[0] - raw[0] / sum(raw)) < 1e-9

    def test_idempotent(self):
        d = build_payoff(components=F4, atoms=[(0.0, 0.3)])
        again = d.normalize()
        for a, b in zip(d.components, again.components):
            assert abs(a.weight - b.weight) < 1e-12
        for a, b in zip(d.atoms, again.atoms):
            assert abs(a.prob - b.prob) < 1e-12

    def test_duplicate_atoms_merged(self):
        d = PayoffDistribution(atoms=(Atom(1.0, 0.25), Atom(1.0, 0.25))).normalize()
        assert len(d.atoms) == 1 and d.atoms[0].prob == 1.0

    def test_zero_mass_unreachable_weights(self):
        with pytest.raises(ValueError):
            GaussComponent(0.0, 0.0, 20.0, -1.0, 1.0)
        with pytest.raises(ValueError):
            PayoffDistribution()

    def test_requires_normalized(self):
        d = PayoffDistribution(atoms=(Atom(1.0, 0.5),))
        with pytest.raises(NotNormalized):
            d.mean()


class TestPdfCdf:
    def test_pdf_outside_window(self):
        d = build_payoff(components=F3)
        assert d.pdf(10.0) == 0.0

    def test_pdf_peak_is_beta(self):
        d = build_payoff(components=F3)
        assert abs(d.pdf(3.0) - BETA) < 1e-9
        # oracle: peak equals 1 / window integral
        assert abs(BETA - 1.0 / _quad_mass(1, 3, 20, 2.5, 3.5)) < 1e-9

    def test_pdf_gap(self):
        d = build_payoff(components=F4)
        assert d.pdf(4.0) == 0.0

    def test_cdf_between_components(self):
        d = build_payoff(components=F4)
        assert abs(d.cdf(5.0) - 0.6) < 1e-6

    def test_cdf_limits(self):
        d = build_payoff(components=F4, atoms=[(3.0, 0.5)])
        assert d.cdf(1e9) == pytest.approx(1.0, abs=1e-12)
        assert d.cdf(-1e9) == 0.0

    def test_cdf_atoms(self):
        d = build_payoff(atoms=[(1.0, 0.8), (2.0, 0.2)])
        assert d.cdf(1.5) == pytest.approx(0.8, abs=1e-12)

    def test_cdf_monotone(self):
        d = build_payoff(components=F4, atoms=[(5.0, 0.25)])
        lo, hi = d.support_bounds()
        xs = np.linspace(lo - 1.0, hi + 1.0, 2000)
        c = d.cdf(xs)
        assert np.all(np.diff(c) >= -1e-12)
        assert c[0] == 0.0 and abs(c[-1] - 1.0) < 1e-9


class TestMeanSample:
    def test_means(self):
        assert abs(build_payoff(components=F4).mean() - 4.0) < 1e-3
        assert abs(build_payoff(components=F5).mean() - 5.0) < 1e-3
        assert build_payoff(atoms=[(7.0, 1.0)]).mean() == 7.0

    def test_variance_against_quadrature(self):
        d = build_payoff(components=F4)
        sq = sum(
            quad(lambda x, k=k: x * x * k.weight * math.exp(-k.rate * (x - k.center) ** 2),
                 k.lo, k.hi, epsabs=1e-12)[0]
            for k in d.components
        )
        assert abs(d.variance() - (sq - d.mean() ** 2)) < 1e-9

    def test_sample_atom(self):
        d = build_payoff(atoms=[(3.0, 1.0)])
        rng = np.random.default_rng(0)
        assert d.sample(rng) == 3.0
        assert np.all(d.sample(rng, 100) == 3.0)

    def test_sample_f3_mean(self):
        d = build_payoff(components=F3)
        x = d.sample(np.random.default_rng(1), 10**5)
        assert abs(x.mean() - 3.0) < 0.01
        assert np.all((x >= 2.5) & (x <= 3.5))

    def test_sample_f4_component_fraction(self):
        d = build_payoff(components=F4)
        x = d.sample(np.random.default_rng(2), 10**5)
        frac = np.mean((x >= 1.5) & (x <= 2.5))
        assert abs(frac - 0.6) < 0.01


class TestConvolve:
    def test_identity_cdf(self):
        d = build_payoff(components=F3)
        gd = convolve_power(d, 1)
        xs = np.linspace(2.0, 4.0, 1001)
        assert np.max(np.abs(gd.cdf(xs) - d.cdf(xs))) < 1e-3

    def test_atom_power(self):
        gd = convolve_power(build_payoff(atoms=[(1.0, 1.0)]), 5)
        support = gd.midpoints[gd.mass > 1e-12]
        assert np.all(np.abs(support - 5.0) <= gd.dx)
        assert abs(gd.mean() - 5.0) < 1e-12

    def test_mean_linearity(self):
        d = build_payoff(components=F3)
        assert abs(convolve_power(d, 2).mean() - 6.0) < 1e-2

    def test_moment_linearity(self):
        d = build_payoff(components=F4, atoms=[(0.0, 0.2)])
        m, v = d.mean(), d.variance()
        for M in (2, 4, 8):
            gd = convolve_power(d, M)
            assert abs(gd.mean() - M * m) <= 1e-3 * M
            assert abs(gd.variance() - M * v) <= 1e-2 * M

    def test_grid_too_coarse(self):
        d = build_payoff(components=F3)
        with pytest.raises(GridTooCoarse):
            convolve_power(d, 2, grid_step=0.5)

    def test_grid_density_validation(self):
        with pytest.raises(ValueError):
            GridDensity(0.0, 0.1, np.array([0.2, 0.2]))  # mass not 1


class TestProbMax:
    def test_example_pairs(self):
        f4 = build_payoff(components=F4)
        f3hat = build_payoff(components=F3HAT)
        f3 = build_payoff(components=F3)
        f5 = build_payoff(components=F5)
        assert abs(prob_max(0, [f4, f3hat]) - 0.76) < 5e-3
        assert abs(prob_max(0, [f3hat, f5]) - 0.28) < 5e-3

    def test_remark_atoms_tie_split(self):
        x = build_payoff(atoms=[(1.0, 0.8), (2.0, 0.2)])
        y = build_payoff(atoms=[(1.0, 1.0)])
        z = build_payoff(atoms=[(1.0, 0.5), (2.0, 0.5)])
        family = [x, y, z]
        got = [prob_max(c, family) for c in range(3)]
        expected = [17.0 / 60.0, 2.0 / 15.0, 35.0 / 60.0]
        for g, e in zip(got, expected):
            assert abs(g - e) < 1e-12
        assert abs(sum(got) - 1.0) < 1e-12
        # independent enumeration oracle agrees
        oracle = [enum_prob_max(c, [atoms_of(d) for d in family]) for c in range(3)]
        assert np.allclose(got, oracle, atol=1e-12)

    def test_identical_pair_symmetric(self):
        f3 = build_payoff(components=F3)
        assert abs(prob_max(0, [f3, f3]) - 0.5) < 1e-6

    def test_singleton(self):
        assert prob_max(0, [build_payoff(components=F3)]) == 1.0

    def test_sum_to_one_mixed_family(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            family = []
            for _ in range(3):
                comps = []
                atoms = []
                if rng.random() < 0.8:
                    c = rng.uniform(0, 6)
                    comps.append((rng.uniform(0.5, 2), c, rng.uniform(5, 30), c - 0.6, c + 0.6))
                if rng.random() < 0.6 or not comps:
                    atoms = [(float(v), 0.5) for v in rng.choice(4, size=2, replace=False)]
                family.append(build_payoff(components=comps, atoms=atoms))
            total = sum(prob_max(c, family) for c in range(3))
            assert abs(total - 1.0) < 1e-6

    def test_monte_carlo_consistency(self):
        f4 = build_payoff(components=F4)
        f3hat = build_payoff(components=F3HAT)
        f3 = build_payoff(components=F3)
        family = [f4, f3hat, f3]
        rng = np.random.default_rng(11)
        n = 10**6
        draws = np.stack([d.sample(rng, n) for d in family])
        top = draws.max(axis=0)
        for c in range(3):
            p = prob_max(c, family)
            est = np.mean(draws[c] == top)  # continuous: ties have measure zero
            assert abs(est - p) <= 3.0 * math.sqrt(p * (1 - p) / n)

    def test_requires_normalized(self):
        raw = PayoffDistribution(atoms=(Atom(1.0, 0.5),))
        with pytest.raises(NotNormalized):
            prob_max(0, [raw, raw])

    def test_grid_members(self):
        # grid cells behave as atoms: identical grids split evenly
        gd = convolve_power(build_payoff(components=F3), 2)
        assert abs(prob_max(0, [gd, gd]) - 0.5) < 1e-9
