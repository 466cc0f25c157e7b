import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gaugeworks.balanced_cantor import (ROOT, BuildError, GridInfeasible, GridSpec, Level,
                                        LevelSystem, NaturalMeasure, additivity_certificate,
                                        auto_schedule, build_grid, build_system,
                                        certify_system, children_map, grid_radius,
                                        lattice_refine, materialize, measure_of_interval,
                                        natural_gauge, refine_balanced, regular_system,
                                        unit_first_level)
from gaugeworks.exactcore import Interval, IntervalFamily, OpenSetModel
from gaugeworks.gauge import Gauge, check_ratio_monotone

import oracles

FULL = IntervalFamily.of((0, 1))
# gaps narrower than the finest grid window, so every level stays feasible
GAPPY = OpenSetModel((
    IntervalFamily.of((0, 1)),
    IntervalFamily.of(("1/10000000", "1/3"), ("100000003/300000000", 1)),
    IntervalFamily.of(("2/10000000", "1/3"), ("100000003/300000000", "2/3"),
                      ("2000000003/3000000000", 1)),
))


class TestGrid:
    def test_full_m4(self):
        g = build_grid(4, FULL)
        assert g.points == [F(9, 40), F(19, 40), F(29, 40), F(39, 40)]
        assert g.r == F(1, 161)

    def test_gap_is_infeasible(self):
        with pytest.raises(GridInfeasible) as info:
            build_grid(4, IntervalFamily.of((0, "49/100")))
        assert info.value.j >= 2

    def test_m1_single_point(self):
        # 9/10 + 1/11 = 109/110 < 1, so the window-left point is admissible
        g = build_grid(1, FULL)
        assert g.points == [F(9, 10)] and g.r == F(1, 11)

    def test_wide_gap_is_infeasible(self):
        with pytest.raises(GridInfeasible, match="j=1"):
            build_grid(4, IntervalFamily.of(("1/2", 1)))

    def test_validate_finds_wide_gap(self):
        g = GridSpec(10**9, IntervalFamily.of((0, "1/3"), ("2/3", 1)))
        with pytest.raises(GridInfeasible):
            g.validate(enum_cap=1000)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 30), st.integers(1, 20), st.integers(1, 20))
    def test_points_match_walk(self, m, a, b):
        cut = F(a, a + b + 1)
        pieces = [(F(0), cut), (cut + F(1, 10 * m * m + 7), F(1))]
        G = IntervalFamily.of(*pieces)
        grid = GridSpec(m, G)
        for j in range(1, m + 1):
            expected = oracles.grid_point(m, pieces, j)
            if expected is None:
                with pytest.raises(GridInfeasible):
                    grid.point(j)
            else:
                x = grid.point(j)
                assert x == expected
                assert abs(x - F(j, m)) <= F(1, 10 * m)

    def test_radius(self):
        for m in (1, 4, 77):
            assert 0 < grid_radius(m) < F(1, 10 * m * m)


class TestRefine:
    def test_root_with_m16(self):
        parent = Level(m=1, r=F(1, 4), F=(F(0),), n=1)
        child = refine_balanced(parent, GridSpec(16, FULL))
        expected = [F(9, 160) + F(j - 1, 16) for j in range(1, 17)
                    if F(9, 160) + F(j - 1, 16) <= F(1, 4) - F(1, 2561)]
        assert list(child.F) == expected and child.n == 4

    def test_minimum_count_trims_right(self):
        grid = GridSpec(100, FULL)
        # room for 5 and 7 grid intervals respectively
        parent = Level(m=1, r=F(7, 100) - F(1, 1000), F=(F(0), F(1, 2)), n=1)
        pts = grid.points
        counts = oracles.children_counts(parent.F, parent.r, pts, grid.r)
        parent2 = Level(m=1, r=F(1, 20), F=(F(0), F(1, 2)), n=1)
        child = refine_balanced(parent, grid)
        assert child.n == min(counts)
        for y in parent.F:
            kept = [x for x in child.F if y <= x < y + parent.r]
            cands = [x for x in pts if y <= x and x + grid.r <= y + parent.r]
            assert kept == cands[: child.n]
        assert refine_balanced(parent2, grid).n <= child.n

    def test_five_and_seven(self):
        grid = GridSpec(100, FULL)
        # the second parent runs off the end of the grid
        parent = Level(m=1, r=F(7, 100), F=(F(0), F(95, 100)), n=1)
        counts = oracles.children_counts(parent.F, parent.r, grid.points, grid.r)
        assert counts == [7, 5]
        child = refine_balanced(parent, grid)
        assert child.n == 5
        assert list(child.F[:5]) == [F(10 * j + 9, 1000) for j in range(5)]
        assert [x for x in child.F if x >= F(95, 100)] == [F(10 * j + 959, 1000)
                                                          for j in range(5)]

    def test_empty(self):
        parent = Level(m=1, r=F(1, 4), F=(F(995, 1000),), n=1)
        with pytest.raises(BuildError, match="refinement empty"):
            refine_balanced(parent, GridSpec(16, FULL))

    def test_too_coarse(self):
        with pytest.raises(BuildError, match="too coarse"):
            build_system(OpenSetModel.full(2), (4, 5), 2)

    @settings(max_examples=15, deadline=None)
    @given(st.sampled_from([4, 5, 6, 8]), st.integers(2, 4), st.integers(0, 2))
    def test_lattice_equals_explicit(self, m1, q_exp, extra):
        parent = unit_first_level(m1)
        m = m1 * (2 ** (q_exp + 6)) * (3 ** extra)
        lat = lattice_refine(parent, m)
        sys_l = LevelSystem((parent, lat))
        explicit = refine_balanced(Level(m1, parent.r, tuple(GridSpec(m1, FULL).points), m1),
                                   GridSpec(m, FULL))
        assert sys_l.points(2) == explicit.F
        assert lat.n == explicit.n


class TestSystem:
    def test_two_levels_est(self):
        s = build_system(OpenSetModel.full(2), (4, 10**4), 2)
        lo = F(1, 161) * 10**4 / 2 * 4
        hi = 2 * F(1, 161) * 10**4 * 4
        assert lo <= s.size(2) <= hi
        # independent recount
        pts1 = GridSpec(4, FULL).points
        grid = GridSpec(10**4, FULL)
        counts = [sum(1 for j in grid.indices_near(y, y + s.r(1))
                      if y <= grid.point(j) and grid.point(j) + grid.r <= y + s.r(1))
                  for y in pts1]
        assert s.level(2).n == min(counts)
        assert natural_gauge(s).breakpoints[1][1] == F(1, s.size(2))

    def test_one_level(self):
        s = build_system(OpenSetModel.full(1), (4,), 1)
        assert s.size(1) == 4
        assert natural_gauge(s) == Gauge.of(("1/161", "1/4"))

    def test_bad_schedules(self):
        with pytest.raises(ValueError):
            build_system(OpenSetModel.full(2), (8, 4), 2)
        with pytest.raises(ValueError):
            build_system(OpenSetModel.full(1), (4, 400), 2)

    def test_gappy_model_certifies(self):
        s = build_system(GAPPY, (4, 400, 4000000), 3)
        assert not s.level(2).lattice
        assert all(certify_system(s, est=True))
        # brute-force nesting and balance
        for k in (2, 3):
            parents, kids = s.points(k - 1), s.points(k)
            counts = oracles.children_counts(parents, s.r(k - 1), kids, s.r(k))
            assert set(counts) == {s.level(k).n}
            assert sum(counts) == len(kids)
            assert all(b - a >= F(4, 5) / s.m(k) for a, b in zip(kids, kids[1:]))
            for x in kids:
                assert GAPPY.member(x, k - 1) and GAPPY.member(x + s.r(k), k - 1)

    def test_auto_schedule_frozen(self):
        s = auto_schedule(OpenSetModel.full(3), 3)
        assert [lv.m for lv in s.levels] == [4, 512, 8388608]
        assert [s.size(k) for k in (1, 2, 3)] == [4, 12, 36]
        assert check_ratio_monotone(natural_gauge(s))
        assert all(certify_system(s, est=True))

    def test_children_map_lattice_vs_explicit(self):
        s = auto_schedule(OpenSetModel.full(3), 3)
        e = materialize(s)
        for k in (1, 2):
            assert children_map(s, k) == children_map(e, k)
        assert all(certify_system(e, est=True))


class TestMeasure:
    s = auto_schedule(OpenSetModel.full(3), 3)

    def test_examples(self):
        mu = NaturalMeasure(self.s)
        x = self.s.points(3)[5]
        assert mu(Interval(x, x + self.s.r(3))) == F(1, 36)
        assert mu(Interval(F(0), F(1))) == 1
        assert measure_of_interval(self.s, Interval(F(0), F(1, 5))) == 0

    def test_level_masses(self):
        mu = NaturalMeasure(self.s)
        for k in (1, 2, 3):
            for x in self.s.points(k):
                assert mu(Interval(x, x + self.s.r(k))) == F(1, self.s.size(k))
        assert additivity_certificate(self.s)

    @settings(max_examples=60, deadline=None)
    @given(st.fractions(min_value=0, max_value=1, max_denominator=10**9),
           st.fractions(min_value=0, max_value=F(1, 10), max_denominator=10**9))
    def test_count_matches_scan(self, a, d):
        pts = self.s.points(3)
        assert self.s.count_in(Interval(a, a + d)) == oracles.count_in(pts, a, a + d)

    def test_regular_toy(self):
        s = regular_system((2, 3))
        assert [s.size(k) for k in (1, 2, 3)] == [1, 2, 6]
        e = regular_system((2, 3), explicit=True)
        rng = random.Random(3)
        for _ in range(300):
            a = F(rng.randrange(0, 1000), 1000)
            I = Interval(a, a + F(rng.randrange(0, 300), 1000))
            assert s.count_in(I) == e.count_in(I) == oracles.count_in(e.points(3), I.left,
                                                                      I.right)


def test_root_level():
    assert ROOT.F == (F(0),) and ROOT.r == 1
