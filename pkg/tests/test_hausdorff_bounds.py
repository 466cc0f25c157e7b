import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gaugeworks.balanced_cantor import (NaturalMeasure, auto_schedule, build_system,
                                        children_map, natural_gauge, regular_system)
from gaugeworks.digit_groups import BaseSystem, DigitSetSpec
from gaugeworks.exactcore import Interval, IntervalFamily, OpenSetModel
from gaugeworks.gauge import Gauge, scale
from gaugeworks.hausdorff_bounds import (BoundCertificate, NodeLimitExceeded, box_counting,
                                         canonical_upper_bound, davies_box_table,
                                         mass_distribution_check, net_measure_dp,
                                         structured_family)

import oracles

BUILT = auto_schedule(OpenSetModel.full(3), 3)
TOY = build_system(OpenSetModel.full(1), (4,), 1)


def tree_of(system):
    return [children_map(system, k) for k in range(1, system.depth)]


def level_weights(system, g, max_diam):
    return [g(system.r(k)) if system.r(k) <= max_diam else None
            for k in range(1, system.depth + 1)]


class TestCanonical:
    def test_natural_is_one(self):
        g = natural_gauge(BUILT)
        assert [canonical_upper_bound(BUILT, g, k) for k in (1, 2, 3)] == [1, 1, 1]

    def test_scaled(self):
        g = scale(natural_gauge(BUILT), 3)
        assert canonical_upper_bound(BUILT, g, 2) == 3

    def test_toy(self):
        assert canonical_upper_bound(TOY, Gauge.of(("1/161", "1/8")), 1) == F(1, 2)

    def test_bad_level(self):
        with pytest.raises(ValueError):
            canonical_upper_bound(TOY, natural_gauge(TOY), 2)


class TestMassCheck:
    def test_factor_eight_passes(self):
        cert = mass_distribution_check(BUILT, natural_gauge(BUILT), 8, random_count=500, seed=1)
        assert cert.passed
        assert (cert.lower, cert.upper) == (F(1, 8), F(1))
        assert cert.checked > 500

    def test_failure_has_witness(self):
        g = natural_gauge(TOY)
        a, b = TOY.points(1)[:2]
        I = Interval(a, b + TOY.r(1))
        # past r_1 the gauge continues with slope 161/4, so g(diam I) is about 10
        cert = mass_distribution_check(TOY, g, F(1, 40), tests=[I], structured=False)
        assert not cert
        wI, info = cert.witnesses[0]
        assert wI == I and info["mu"] == F(1, 2)
        assert info["mu"] > info["bound"]

    def test_structured_family_contents(self):
        fam = structured_family(TOY)
        pts, r = TOY.points(1), TOY.r(1)
        assert Interval(pts[0], pts[0] + r) in fam
        assert Interval(pts[0], pts[1] + r) in fam
        assert len(fam) == 4 + 3

    def test_large_regular_uses_representatives(self):
        s = regular_system((40, 40, 40, 40))
        fam = structured_family(s, limit=1000)
        assert len(fam) < 30
        assert mass_distribution_check(s, natural_gauge(s), 8, tests=fam, structured=False)

    def test_small_intervals_need_factor_one(self):
        # r_{k+1} <= diam I < 1/(2 m_{k+1}) meets at most one level-(k+1) interval
        g = natural_gauge(BUILT)
        mu = NaturalMeasure(BUILT)
        rng = random.Random(11)
        for _ in range(300):
            k = rng.randrange(1, BUILT.depth)
            lo, hi = BUILT.r(k + 1), F(1, 2 * BUILT.m(k + 1))
            d = lo + (hi - lo) * F(rng.randrange(10**6), 10**6)
            anchor = BUILT.point(BUILT.depth, rng.randrange(BUILT.size(BUILT.depth)))
            left = anchor - d * F(rng.randrange(10**6), 10**6)
            assert mu(Interval(left, left + d)) <= g(d)

    def test_bad_factor(self):
        with pytest.raises(ValueError):
            mass_distribution_check(TOY, natural_gauge(TOY), 0)

    def test_certificate_order(self):
        with pytest.raises(ValueError):
            BoundCertificate(F(1), F(1, 2), 1, "x")


class TestNetDP:
    def test_natural_is_one(self):
        for s in (BUILT, regular_system((2, 3)), regular_system((3, 2, 2))):
            assert net_measure_dp(s, natural_gauge(s), s.r(1)) == 1

    def test_doubled_level_is_avoided(self):
        s = regular_system((3, 3))
        nat = natural_gauge(s)
        (r1, y1), (r2, y2), (r3, y3) = sorted(nat.breakpoints, reverse=True)
        doubled = Gauge(((r1, y1), (r2, 2 * y2), (r3, y3)))
        assert doubled(r2) == 2 * nat(r2)
        assert net_measure_dp(s, doubled, r1) == 1
        assert oracles.antichain_min(tree_of(s), level_weights(s, doubled, r1)) == 1

    def test_single_node(self):
        s = regular_system(())
        g = Gauge.of((1, "1/3"))
        assert net_measure_dp(s, g, F(1)) == F(1, 3)

    def test_node_limit(self):
        with pytest.raises(NodeLimitExceeded, match="node limit exceeded"):
            net_measure_dp(regular_system((10, 10)), Gauge.of((1, 1)), F(1), node_limit=50)

    def test_dominated_by_canonical(self):
        g = natural_gauge(BUILT)
        dp = net_measure_dp(BUILT, scale(g, 2), BUILT.r(1))
        assert dp <= min(canonical_upper_bound(BUILT, scale(g, 2), k) for k in (1, 2, 3))

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(1, 3), min_size=1, max_size=3),
           st.lists(st.fractions(min_value=F(1, 20), max_value=3, max_denominator=40),
                    min_size=4, max_size=4),
           st.integers(0, 3))
    def test_matches_exhaustive(self, branching, ys, cut):
        s = regular_system(tuple(branching))
        K = s.depth
        ys = sorted(set(ys), reverse=True)
        if len(ys) < K:
            return
        g = Gauge(tuple((s.r(k), ys[k - 1]) for k in range(1, K + 1)))
        max_diam = s.r(min(cut, K - 1) + 1)
        expected = oracles.antichain_min(tree_of(s), level_weights(s, g, max_diam))
        assert net_measure_dp(s, g, max_diam) == expected
        # monotone in the gauge
        assert net_measure_dp(s, scale(g, 2), max_diam) == 2 * expected


class TestBoxCounting:
    def test_unit_interval(self):
        rows = box_counting(IntervalFamily.of((0, 1)), [F(1, 2**k) for k in range(1, 8)])
        assert [r.count for r in rows] == [2**k for k in range(1, 8)]
        assert all(abs(r.ratio - 1) < 1e-12 for r in rows)

    def test_single_point(self):
        rows = box_counting(IntervalFamily.of(("1/3", "1/3")), [F(1, 10**k) for k in (1, 3, 6)])
        assert [r.count for r in rows] == [1, 1, 1]
        assert all(r.ratio == 0 for r in rows)

    def test_davies_table(self):
        rows = davies_box_table(6)
        bound = 1
        for k, row in enumerate(rows, start=1):
            bound *= k + 1
            assert row.count <= bound
        ratios = [r.ratio for r in rows]
        assert all(b < a for a, b in zip(ratios, ratios[1:]))

    def test_davies_cells_agree(self):
        base = BaseSystem.davies_variant(4)
        spec = DigitSetSpec(base)
        scales = [F(1, base.scale(k)) for k in range(1, 5)]
        assert [r.count for r in box_counting(spec, scales)] == \
            [r.count for r in davies_box_table(4)]

    def test_system_counts(self):
        rows = box_counting(BUILT, [BUILT.r(1), BUILT.r(2)])
        assert rows[0].count >= BUILT.size(1)

    def test_scales_validated(self):
        with pytest.raises(ValueError):
            box_counting(IntervalFamily.of((0, 1)), [F(1, 4), F(1, 2)])
        with pytest.raises(ValueError):
            box_counting(IntervalFamily.of((0, 1)), [F(0)])
