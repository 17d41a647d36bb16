import math

import numpy as np
import pytest
from scipy.stats import binom, gamma

from lighttails import distributions as D
from lighttails import verify as V
from lighttails.entropy import FiniteDist, ProductTable
from lighttails.functions import SumFunction, VectorNormOfSum


def sum_of(spec, n):
    return SumFunction([spec] * n)


class TestClopperPearson:
    def test_edges(self):
        lo, hi = V.clopper_pearson(0, 100)
        assert lo == 0.0 and 0 < hi < 0.1
        lo, hi = V.clopper_pearson(100, 100)
        assert hi == 1.0 and 0.9 < lo < 1

    def test_contains_point_estimate(self):
        for k in (1, 17, 250, 999):
            lo, hi = V.clopper_pearson(k, 1000)
            assert lo <= k / 1000 <= hi

    def test_exact_binomial_inversion(self):
        # at the lower endpoint the upper binomial tail equals alpha/2
        k, n, level = 30, 200, 0.999
        lo, hi = V.clopper_pearson(k, n, level)
        alpha = (1 - level) / 2
        assert binom.sf(k - 1, n, lo) == pytest.approx(alpha, rel=1e-9)
        assert binom.cdf(k, n, hi) == pytest.approx(alpha, rel=1e-9)

    def test_widens_with_level(self):
        lo1, hi1 = V.clopper_pearson(50, 1000, 0.9)
        lo2, hi2 = V.clopper_pearson(50, 1000, 0.999)
        assert lo2 < lo1 and hi2 > hi1

    def test_invalid(self):
        with pytest.raises(ValueError):
            V.clopper_pearson(5, 4)
        with pytest.raises(ValueError):
            V.clopper_pearson(1, 10, 1.0)


class TestEstimateTail:
    def test_single_rademacher(self):
        est = V.estimate_tail(sum_of(D.Rademacher(), 1), [0.5], 10 ** 4, seed=3)
        assert est.mean_value == 0.0 and est.mean_half_width == 0.0
        lo, hi = est.intervals()[0]
        assert lo <= 0.5 <= hi
        assert abs(est.empirical_tail[0] - 0.5) < 0.02

    def test_gamma_sum_matches_sf(self):
        fspec = sum_of(D.Exponential(1.0), 10)
        grid = [1.0, 3.0, 6.0]
        est = V.estimate_tail(fspec, grid, 10 ** 5, seed=11)
        for t, (lo, hi) in zip(grid, est.intervals()):
            truth = float(gamma.sf(10.0 + t, 10))
            assert lo <= truth <= hi

    def test_deterministic(self):
        fspec = sum_of(D.Exponential(1.0), 3)
        a = V.estimate_tail(fspec, [1.0, 2.0], 2 * 10 ** 4, seed=5)
        b = V.estimate_tail(fspec, [1.0, 2.0], 2 * 10 ** 4, seed=5)
        assert a == b
        c = V.estimate_tail(fspec, [1.0, 2.0], 2 * 10 ** 4, seed=6)
        assert c.exceed_counts != a.exceed_counts

    def test_thread_invariance(self):
        fspec = sum_of(D.Gaussian(0.0, 1.0), 2)
        a = V.estimate_tail(fspec, [0.5, 1.5], 3 * 10 ** 5, seed=7, threads=1)
        b = V.estimate_tail(fspec, [0.5, 1.5], 3 * 10 ** 5, seed=7, threads=8)
        assert a == b

    def test_grid_validation(self):
        fspec = sum_of(D.Rademacher(), 1)
        with pytest.raises(ValueError, match="ascending"):
            V.estimate_tail(fspec, [1.0, 1.0], 10 ** 4, seed=0)
        with pytest.raises(ValueError, match="positive"):
            V.estimate_tail(fspec, [-1.0, 1.0], 10 ** 4, seed=0)
        with pytest.raises(ValueError, match="nonempty"):
            V.estimate_tail(fspec, [], 10 ** 4, seed=0)
        with pytest.raises(ValueError, match="n_samples"):
            V.estimate_tail(fspec, [1.0], 10 ** 3, seed=0)

    def test_expectation_budget_guard(self):
        vec = D.VectorSpec(2, [D.Rademacher(), D.Rademacher()])
        fspec = VectorNormOfSum(vec, n=5)
        with pytest.raises(ValueError, match="expectation budget too small"):
            V.estimate_tail(fspec, [1e-4, 2e-4], 10 ** 4, seed=0,
                            expectation_budget=10 ** 4)


class TestExactEnumeration:
    def test_two_rademacher_sum(self):
        r = FiniteDist([-1.0, 1.0], [0.5, 0.5])
        f = np.add.outer([-1.0, 1.0], [-1.0, 1.0])
        table = ProductTable([r, r], f)
        tails = V.exact_tail_enumeration(table, [0.5, 1.0, 1.5, 2.5])
        assert tails == [0.25, 0.25, 0.25, 0.0]

    def test_centering(self):
        y = FiniteDist([0.0, 10.0], [0.9, 0.1])
        table = ProductTable([y], np.array([0.0, 10.0]))
        # mean 1: only the mass at 10 exceeds mean + 2
        assert V.exact_tail_enumeration(table, [2.0]) == [pytest.approx(0.1)]


class TestBoundsOnGrid:
    def test_kinds_and_shapes(self):
        fspec = sum_of(D.Exponential(1.0), 4)
        grid = [0.5, 1.0, 2.0]
        out = V.bounds_on_grid(fspec, ["thm2", "bounded-difference"], grid)
        assert set(out) == {"thm2", "bounded-difference"}
        assert [r.t for r in out["thm2"]] == grid
        assert all(math.isfinite(r.log_prob) for r in out["thm2"])
        # exponential coordinates have unbounded range
        assert all(r.prob == 1.0 and "inapplicable" in r.note
                   for r in out["bounded-difference"])

    def test_thm3_requires_p(self):
        fspec = sum_of(D.Rademacher(), 2)
        out = V.bounds_on_grid(fspec, ["thm3"], [1.0], p=2.0)
        assert out["thm3"][0].kind == "thm3"


class TestCheckBounds:
    def test_sound_exact(self):
        r = FiniteDist([-1.0, 1.0], [0.5, 0.5])
        f = np.add.outer([-1.0, 1.0], [-1.0, 1.0])
        table = ProductTable([r, r], f)
        grid = [0.5, 1.0, 1.9]
        tails = V.exact_tail_enumeration(table, grid)
        bounds = V.bounds_on_grid(sum_of(D.Rademacher(), 2), ["thm1", "thm2"], grid)
        report = V.check_bounds(tails, bounds, metadata={"tag": "x"})
        assert report.verdict == "SOUND"
        assert report.verdicts == ("SOUND",) * 3
        assert report.metadata == {"tag": "x"}
        assert report.to_dict()["rows"][0]["t"] == 0.5

    def test_falsified_violation(self):
        # one Rademacher at t = 1/2: exact tail 1/2 beats the halved bound
        fspec = sum_of(D.Rademacher(), 1)
        grid = [0.5]
        bounds = V.falsified_bounds(V.bounds_on_grid(fspec, ["thm2"], grid))
        assert set(bounds) == {"thm2-falsified"}
        assert bounds["thm2-falsified"][0].prob < 0.5
        report = V.check_bounds([0.5], bounds)
        assert report.verdict == "VIOLATION"

    def test_mc_sound(self):
        fspec = sum_of(D.Exponential(1.0), 10)
        grid = list(np.linspace(1.0, 20.0, 8))
        est = V.estimate_tail(fspec, grid, 10 ** 5, seed=13)
        bounds = V.bounds_on_grid(fspec, ["thm2"], grid)
        assert V.check_bounds(est, bounds).verdict == "SOUND"

    def test_grid_mismatch(self):
        fspec = sum_of(D.Rademacher(), 1)
        est = V.estimate_tail(fspec, [0.5], 10 ** 4, seed=0)
        bounds = V.bounds_on_grid(fspec, ["thm2"], [0.7])
        with pytest.raises(ValueError, match="grid"):
            V.check_bounds(est, bounds)
        with pytest.raises(ValueError, match="no bounds"):
            V.check_bounds(est, {})


class TestCompareBounds:
    def test_ratios_and_verdict(self):
        fspec = sum_of(D.Exponential(1.0), 5)
        grid = [2.0, 5.0, 40.0]
        report = V.compare_bounds(fspec, ["thm2", "bounded-difference"], grid,
                                  5 * 10 ** 4, seed=17)
        assert report.verdict == "SOUND"
        assert set(report.ratios_log10) == {"thm2", "bounded-difference"}
        # slack is positive where exceedances were seen, inf where none
        r2 = report.ratios_log10["thm2"]
        assert r2[0] > 0
        assert r2[-1] == math.inf
        # the baseline is vacuous here, the new bound is not
        assert report.bound_probs["bounded-difference"] == (1.0, 1.0, 1.0)
        assert report.bound_probs["thm2"][1] < 1.0

    def test_thm1_wins_at_large_t_for_gaussians(self):
        fspec = sum_of(D.Gaussian(0.0, 1.0), 5)
        grid = [200.0]
        out = V.bounds_on_grid(fspec, ["thm1", "thm2"], grid)
        assert out["thm1"][0].log_prob < out["thm2"][0].log_prob

    def test_thm3_wins_when_moments_small(self):
        # Rademacher 2p-norms are 1 while 2e psi1 is much larger
        fspec = sum_of(D.Rademacher(), 6)
        grid = [0.5]
        out = V.bounds_on_grid(fspec, ["thm2", "thm3"], grid, p=2.0)
        assert out["thm3"][0].prob < out["thm2"][0].prob


class TestCsv:
    def test_layout_and_determinism(self):
        fspec = sum_of(D.Exponential(1.0), 3)
        grid = [1.0, 4.0]
        kwargs = dict(kinds=["thm2"], t_grid=grid, n_samples=10 ** 4, seed=19)
        a = V.report_to_csv(V.compare_bounds(fspec, **kwargs))
        b = V.report_to_csv(V.compare_bounds(fspec, **kwargs, threads=4))
        assert a == b
        lines = a.strip().split("\n")
        assert lines[0] == "t,empirical,cp_lo,cp_hi,thm2,ratio_log10_thm2,verdict"
        assert len(lines) == 3
        first = lines[1].split(",")
        assert first[0] == "1.0" and first[-1] == "SOUND"
        # floats round-trip exactly through repr
        assert float(first[4]) == V.compare_bounds(fspec, **kwargs).bound_probs["thm2"][0]
