from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from gaugeworks.exactcore import (InputError, Interval, IntervalFamily, OpenSetModel, TailMass,
                                  fmt, tail_mass, to_rational, validate_nested)

import oracles

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=1000)
unit = st.fractions(min_value=0, max_value=1, max_denominator=500)


@st.composite
def families(draw, size=st.integers(0, 12)):
    out = []
    for _ in range(draw(size)):
        a, b = sorted((draw(unit), draw(unit)))
        out.append(Interval(a, b))
    return IntervalFamily(tuple(out))


class TestRationals:
    def test_strings_and_ints(self):
        assert to_rational("3/6") == F(1, 2)
        assert to_rational(5) == F(5)
        assert to_rational("-7") == F(-7)

    @pytest.mark.parametrize("bad", ["3/0", "x/2", "1.5", 0.5, True, None])
    def test_rejects(self, bad):
        with pytest.raises(InputError):
            to_rational(bad, "field")

    def test_error_names_location(self):
        with pytest.raises(InputError, match="levels\\[2\\].r"):
            to_rational("1/0", "levels[2].r")

    def test_fmt_lowest_terms(self):
        assert fmt(F(2, 4)) == "1/2"
        assert fmt(3) == "3/1"
        assert fmt(F(-6, 4)) == "-3/2"

    @given(rationals, rationals)
    def test_exact_roundtrip(self, a, b):
        assert (a + b) - b == a
        assert to_rational(fmt(a)) == a


class TestTailMass:
    fam = IntervalFamily.of((0, "1/2"), (0, "1/8"))

    def test_examples(self):
        assert tail_mass(self.fam, F(1, 4)) == F(1, 8)
        assert tail_mass(self.fam, F(1)) == F(5, 8)
        assert tail_mass(self.fam, F(0)) == 0

    def test_degenerate_at_zero(self):
        fam = IntervalFamily.of((F(1, 3), F(1, 3)), (0, 1))
        assert tail_mass(fam, F(0)) == 0

    def test_negative_delta(self):
        with pytest.raises(ValueError):
            tail_mass(self.fam, F(-1))

    @given(families(), unit, unit)
    def test_monotone(self, fam, d1, d2):
        lo, hi = sorted((d1, d2))
        assert tail_mass(fam, lo) <= tail_mass(fam, hi)

    @given(families())
    def test_max_diam_gives_total(self, fam):
        assert tail_mass(fam, fam.max_diam()) == fam.total_length()

    @given(families(), unit)
    def test_prefix_sums_agree(self, fam, d):
        assert TailMass(fam)(d) == tail_mass(fam, d)
        assert tail_mass(fam, d) == oracles.tail_mass([I.diam for I in fam], d)


class TestNested:
    def test_pass(self):
        model = OpenSetModel((IntervalFamily.of((0, 1)), IntervalFamily.of((0, "1/2"))))
        assert validate_nested(model)

    def test_fail_witness(self):
        model = OpenSetModel((IntervalFamily.of((0, "1/2")), IntervalFamily.of((0, 1))))
        cert = validate_nested(model)
        assert not cert
        assert cert.witness == F(3, 4)

    def test_single_level(self):
        assert validate_nested(OpenSetModel.full(1))

    def test_shared_endpoint_is_uncovered(self):
        outer = IntervalFamily.of((0, "1/2"), ("1/2", 1))
        model = OpenSetModel((outer, IntervalFamily.of(("1/4", "3/4"))))
        cert = validate_nested(model)
        assert not cert and cert.witness == F(1, 2)

    def test_rejects_overlap_and_outside(self):
        with pytest.raises(InputError):
            OpenSetModel((IntervalFamily.of((0, "1/2"), ("1/4", 1)),))
        with pytest.raises(InputError):
            OpenSetModel((IntervalFamily.of((0, 2)),))

    @given(st.lists(st.tuples(unit, unit), min_size=1, max_size=4),
           st.lists(unit, min_size=1, max_size=20))
    def test_pass_implies_membership(self, pairs, xs):
        pieces = sorted({tuple(sorted(p)) for p in pairs if p[0] != p[1]})
        # make the pieces disjoint by dropping overlaps
        kept = []
        for a, b in pieces:
            if not kept or a >= kept[-1][1]:
                kept.append((a, b))
        if not kept:
            return
        outer = IntervalFamily.of(*kept)
        a, b = kept[0]
        inner = IntervalFamily.of((a + (b - a) / 4, b - (b - a) / 4))
        model = OpenSetModel((outer, inner))
        assert validate_nested(model)
        for x in xs:
            if model.member(x, 1):
                assert model.member(x, 0)


def test_interval_rejects_reversed():
    with pytest.raises(InputError):
        Interval(F(1), F(0))
