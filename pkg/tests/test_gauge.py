import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from gaugeworks.exactcore import InputError
from gaugeworks.gauge import (Gauge, check_concave, check_monotone_on, check_ratio_monotone,
                              dominated, eval_gauge, pointwise_min, scale)

import oracles

pos = st.fractions(min_value=F(1, 1000), max_value=2, max_denominator=1000)


@st.composite
def gauges(draw):
    xs = sorted(set(draw(st.lists(pos, min_size=1, max_size=5))), reverse=True)
    ys = sorted(set(draw(st.lists(pos, min_size=len(xs), max_size=len(xs) + 3))), reverse=True)
    if len(ys) < len(xs):
        ys = [F(len(xs) - i) for i in range(len(xs))]
    return Gauge(tuple(zip(xs, ys[: len(xs)])))


G = Gauge.of((1, 1), ("1/2", "1/4"))


class TestEval:
    def test_examples(self):
        assert eval_gauge(G, F(3, 4)) == F(5, 8)
        assert eval_gauge(G, F(1, 2)) == F(1, 4)
        assert eval_gauge(G, F(0)) == 0

    def test_extension_uses_last_slope(self):
        assert eval_gauge(G, F(2)) == F(1) + F(3, 2)
        assert eval_gauge(Gauge.of((1, "1/2")), F(3)) == F(3, 2)

    def test_below_first_breakpoint(self):
        assert eval_gauge(G, F(1, 4)) == F(1, 8)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            eval_gauge(G, F(-1))

    @pytest.mark.parametrize("pts", [[], [(1, 0)], [(1, 1), (1, "1/2")], [("1/2", 1), (1, 2)],
                                     [(1, 1), ("1/2", 2)]])
    def test_invalid(self, pts):
        with pytest.raises(InputError):
            Gauge.of(*pts)

    @given(gauges(), st.fractions(min_value=0, max_value=3, max_denominator=500))
    def test_matches_oracle(self, g, x):
        assert eval_gauge(g, x) == oracles.gauge_value(g.breakpoints, x)

    @given(gauges(), st.fractions(min_value=0, max_value=3, max_denominator=500),
           st.fractions(min_value=0, max_value=3, max_denominator=500))
    def test_monotone(self, g, a, b):
        lo, hi = sorted((a, b))
        assert eval_gauge(g, lo) <= eval_gauge(g, hi)


class TestMin:
    def test_idempotent(self):
        m = pointwise_min(G, G)
        for x in (F(1, 7), F(1, 2), F(3, 4), F(2)):
            assert m(x) == G(x)

    def test_crossing(self):
        g2 = Gauge.of((1, "1/2"))
        m = pointwise_min(G, g2)
        # on [1/2, 1] g1 = 3x/2 - 1/2 meets x/2 at x = 1/2; below, g1 = x/2 too
        for x in (F(1, 8), F(1, 3), F(1, 2), F(2, 3), F(1)):
            assert m(x) == min(G(x), g2(x))
        assert m(F(3, 4)) == F(3, 8)

    def test_crossing_above_top(self):
        g1 = Gauge.of((1, 1))
        g2 = Gauge.of((1, 2), ("1/2", "1/2"))  # slope 3 past 1/2, crosses x at 1/2 ... and beyond
        m = pointwise_min(g1, g2)
        for x in (F(1, 4), F(3, 4), F(1), F(5), F(10)):
            assert m(x) == min(g1(x), g2(x))

    def test_tie_at_top(self):
        # equal at the shared top breakpoint, different slopes beyond it
        g1 = Gauge.of(("3/1000", "1/500"), ("1/1000", "1/1000"))
        g2 = Gauge.of(("3/1000", "1/500"))
        m = pointwise_min(g1, g2)
        for x in (F(1, 1000), F(2, 1000), F(1), F(7)):
            assert m(x) == min(g1(x), g2(x))

    def test_thousand_random_points(self):
        g2 = Gauge.of((1, "1/2"))
        m = pointwise_min(G, g2)
        rng = random.Random(5)
        for _ in range(1000):
            x = F(rng.randrange(1, 3000), 1000)
            assert m(x) == min(G(x), g2(x))

    @given(gauges(), gauges(), st.lists(st.fractions(min_value=0, max_value=4,
                                                     max_denominator=300), max_size=20))
    def test_property(self, g1, g2, xs):
        m = pointwise_min(g1, g2)
        for x in xs:
            v = m(x)
            assert v == min(g1(x), g2(x))


class TestChecks:
    def test_ratio_monotone(self):
        cert = check_ratio_monotone(G)
        assert not cert
        assert cert.witness == ((F(1), F(1)), (F(1, 2), F(1, 4)))
        assert check_ratio_monotone(Gauge.of((1, 1), ("1/2", "3/4")))
        assert check_ratio_monotone(Gauge.of((1, 1)))

    def test_concave(self):
        assert check_concave(Gauge.of((1, 1), ("1/2", "3/4")))
        assert not check_concave(Gauge.of((1, 1), ("1/2", "1/8")))
        assert check_concave(Gauge.of((1, 1)))

    def test_scale(self):
        assert scale(G, 1) == G
        assert scale(Gauge.of((1, 1)), 2) == Gauge.of((1, 2))
        with pytest.raises(ValueError, match="scale factor must be positive"):
            scale(G, 0)

    @given(gauges(), st.fractions(min_value=F(1, 100), max_value=100, max_denominator=100),
           st.lists(st.fractions(min_value=0, max_value=3, max_denominator=200), max_size=10))
    def test_scale_linear(self, g, c, xs):
        h = scale(g, c)
        for x in xs:
            assert h(x) == c * g(x)

    def test_monotone_and_dominated(self):
        assert check_monotone_on(G, [F(0), F(1, 3), F(2)])
        assert dominated(G, scale(G, 2), [F(1, 3), F(1)])
        assert not dominated(scale(G, 2), G, [F(1, 3)])
