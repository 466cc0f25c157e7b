from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from gaugeworks.convolve import (CapExceeded, DiscreteMeasure, pigeonhole_translates,
                                 pushforward_sum)
from gaugeworks.digit_groups import (BaseSystem, DigitSetSpec, demo_components,
                                     translate_pipeline, value_of)
from gaugeworks.exactcore import InputError

import oracles


@st.composite
def measures(draw):
    pts = draw(st.sets(st.fractions(min_value=-2, max_value=2, max_denominator=16),
                       min_size=1, max_size=4))
    ws = [draw(st.fractions(min_value=F(1, 10), max_value=2, max_denominator=10))
          for _ in pts]
    return DiscreteMeasure(tuple(zip(sorted(pts), ws)))


K1 = DiscreteMeasure.of([(0, "1/2"), ("1/4", "1/2")])
K2 = DiscreteMeasure.of([(0, "1/2"), ("1/16", "1/2")])


class TestPushforward:
    def test_example(self):
        out = pushforward_sum([K1, K2])
        assert out.support == tuple((F(x), F(1, 4)) for x in ("0", "1/16", "1/4", "5/16"))

    def test_single_and_identity(self):
        assert pushforward_sum([K1]) == K1
        assert pushforward_sum([DiscreteMeasure.point(0), K1]) == K1

    def test_cap(self):
        with pytest.raises(CapExceeded, match="cap exceeded"):
            pushforward_sum([K1] * 5, cap=16)
        with pytest.raises(ValueError):
            pushforward_sum([])

    def test_validation(self):
        with pytest.raises(InputError):
            DiscreteMeasure.of([(0, 0)])
        with pytest.raises(InputError):
            DiscreteMeasure.of([(0, 1), ("0/3", 1)])

    @given(st.lists(measures(), min_size=1, max_size=3))
    def test_matches_oracle(self, ms):
        out = pushforward_sum(ms)
        expected = oracles.convolve([m.support for m in ms])
        assert dict(out.support) == expected
        mass = F(1)
        for m in ms:
            mass *= m.mass
        assert out.mass == mass

    @given(measures(), measures(), measures())
    def test_commutative_associative(self, a, b, c):
        assert pushforward_sum([a, b]) == pushforward_sum([b, a])
        left = pushforward_sum([pushforward_sum([a, b]), c])
        right = pushforward_sum([a, pushforward_sum([b, c])])
        assert left == right == pushforward_sum([a, b, c])

    @given(measures(), measures())
    def test_support_in_sumset(self, a, b):
        sums = {x + y for x in a.points for y in b.points}
        out = pushforward_sum([a, b])
        assert set(out.points) <= sums
        if len(sums) == len(a) * len(b):
            assert set(out.points) == sums


class TestPigeonhole:
    def test_five_translates_two_parts(self):
        K = DiscreteMeasure.uniform([0, F(1, 10)])
        ts = [F(j) for j in range(5)]
        union = sorted(x + t for t in ts for x in K.points)
        parts = [union[:4], union[4:]]
        rep = pigeonhole_translates(K, ts, parts)
        assert rep.passed and rep.guaranteed == 3
        assert rep.hits[rep.best_part] >= 3
        assert "finite analogue" in rep.note

    def test_single(self):
        K = DiscreteMeasure.uniform([0, 1])
        rep = pigeonhole_translates(K, [F(0)], [[0, 1]])
        assert rep.masses == ((F(1),),) and rep.best_part == 0

    def test_invalid_partitions(self):
        K = DiscreteMeasure.uniform([0, 1])
        with pytest.raises(InputError, match="in no part"):
            pigeonhole_translates(K, [0], [[0]])
        with pytest.raises(InputError, match="parts 0 and 1"):
            pigeonhole_translates(K, [0], [[0, 1], [1]])
        with pytest.raises(InputError, match="lies in no translate"):
            pigeonhole_translates(K, [0], [[0, 1, 5]])

    def test_digit_instance(self):
        spec = DigitSetSpec(BaseSystem(tuple(4**i for i in range(1, 16))))
        comps = demo_components(spec, (4, 4), depth=14, seed=1)
        pipe = translate_pipeline(spec, comps, 3)
        base = spec.base
        shadows = [DiscreteMeasure.uniform({value_of(base, v) for v in u})
                   for u in pipe.uniformized]
        K = pushforward_sum(shadows)
        ts = [value_of(base, pipe.P.element(s)) for s in pipe.P.selections()]
        union = sorted({x + t for t in ts for x in K.points})
        assert len(union) == len(ts) * len(K)  # translates are disjoint
        half = union[len(union) // 2]
        parts = [[y for y in union if y < half], [y for y in union if y >= half]]
        rep = pigeonhole_translates(K, ts, parts)
        # independent recount by enumeration
        for t, row in zip(ts, rep.masses):
            low = sum((w for x, w in K.support if x + t < half), F(0))
            assert row == (low, K.mass - low)
        assert rep.passed and sum(rep.hits) == 8
