"""Exact rational plumbing: intervals, interval families, dense-open set models.

Every quantity is a :class:`fractions.Fraction`. Floats are rejected at the
boundary so that no inequality certificate ever depends on rounding.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Iterator, Sequence

Rational = Fraction


class InputError(ValueError):
    """Malformed input data (bad rational, broken invariant, schema mismatch).

    ``where`` names the offending location, e.g. ``"levels[2].r"``.
    """

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def to_rational(value: Any, where: str | None = None) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats and bools are refused outright.
    """
    if isinstance(value, bool):
        raise InputError("booleans are not rationals", where)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InputError(f"float {value!r} is not an exact rational", where)
    if isinstance(value, str):
        s = value.strip()
        num, sep, den = s.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise InputError(f"malformed rational {value!r}", where) from None
        if q == 0:
            raise InputError(f"zero denominator in {value!r}", where)
        return Fraction(p, q)
    raise InputError(f"cannot read {type(value).__name__} as a rational", where)


def fmt(x: Fraction | int) -> str:
    """Canonical ``"p/q"`` form (lowest terms, q > 0, q always written)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Certificate:
    """Outcome of an exact check.

    ``values`` holds the exact quantities that were compared; ``witness`` is
    a violating (or, for some checks, exhibiting) object when there is one.
    """

    name: str
    passed: bool
    values: dict = field(default_factory=dict)
    witness: Any = None
    depth: int | None = None

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True, order=True)
class Interval:
    left: Fraction
    right: Fraction

    def __post_init__(self):
        object.__setattr__(self, "left", Fraction(self.left))
        object.__setattr__(self, "right", Fraction(self.right))
        if self.left > self.right:
            raise InputError(f"interval has left {self.left} > right {self.right}")

    @property
    def diam(self) -> Fraction:
        return self.right - self.left

    def contains_point(self, x: Fraction) -> bool:
        return self.left <= x <= self.right

    def contains_open(self, x: Fraction) -> bool:
        return self.left < x < self.right

    def contains(self, other: Interval) -> bool:
        return self.left <= other.left and other.right <= self.right

    def meets(self, other: Interval) -> bool:
        return self.left <= other.right and other.left <= self.right

    def __repr__(self) -> str:
        return f"[{self.left}, {self.right}]"


@dataclass(frozen=True)
class IntervalFamily:
    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(self.intervals))

    @classmethod
    def of(cls, *pairs: tuple[Any, Any]) -> IntervalFamily:
        return cls(tuple(Interval(to_rational(a), to_rational(b)) for a, b in pairs))

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def total_length(self) -> Fraction:
        return sum((I.diam for I in self.intervals), Fraction(0))

    def max_diam(self) -> Fraction:
        return max((I.diam for I in self.intervals), default=Fraction(0))


def tail_mass(family: Iterable[Interval], delta: Fraction) -> Fraction:
    """Total length of the intervals whose diameter is at most ``delta``."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    return sum((I.diam for I in family if I.diam <= delta), Fraction(0))


class TailMass:
    """Precomputed c(delta) for a large family: sorted diameters + prefix sums.

    Agrees with :func:`tail_mass` exactly; each query is a bisection.
    """

    def __init__(self, family: Iterable[Interval]):
        self._diams = sorted(I.diam for I in family)
        self._prefix = [Fraction(0)]
        for d in self._diams:
            self._prefix.append(self._prefix[-1] + d)

    def __call__(self, delta: Fraction) -> Fraction:
        if delta < 0:
            raise ValueError("delta must be nonnegative")
        return self._prefix[bisect.bisect_right(self._diams, delta)]

    @property
    def total(self) -> Fraction:
        return self._prefix[-1]


@dataclass(frozen=True)
class OpenSetModel:
    """Nested open sets G_1 ⊇ G_2 ⊇ ... inside (0,1), each a finite union.

    Level intervals are stored closed and read as open at use sites.
    """

    levels: tuple[IntervalFamily, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        for n, fam in enumerate(self.levels):
            ivs = sorted(fam.intervals)
            for i, I in enumerate(ivs):
                if I.left < 0 or I.right > 1 or I.diam == 0:
                    raise InputError(f"open interval {I} not a nonempty subset of (0,1)",
                                     f"levels[{n}][{i}]")
                if i and ivs[i - 1].right > I.left:
                    raise InputError(f"intervals {ivs[i - 1]} and {I} overlap",
                                     f"levels[{n}]")

    @classmethod
    def full(cls, depth: int) -> OpenSetModel:
        """The model G_n = (0,1) for every n."""
        return cls(tuple(IntervalFamily.of((0, 1)) for _ in range(depth)))

    def __len__(self) -> int:
        return len(self.levels)

    def member(self, x: Fraction, level: int) -> bool:
        return any(I.contains_open(x) for I in self.levels[level])


def _uncovered_point(inner: Sequence[Interval], outer: Sequence[Interval]) -> Fraction | None:
    """A point of the open union ``inner`` outside the open union ``outer``."""
    outer = sorted(outer)
    for I in sorted(inner):
        pos = I.left
        for J in outer:
            if J.right <= pos:
                continue
            if J.left > pos:
                break
            if pos > I.left and J.left == pos:
                # shared endpoint strictly inside I is in no open piece
                return pos
            pos = J.right
            if pos >= I.right:
                break
        if pos >= I.right:
            continue
        nxt = min((J.left for J in outer if J.left > pos), default=I.right)
        return (pos + min(nxt, I.right)) / 2
    return None


def validate_nested(model: OpenSetModel) -> Certificate:
    """Check that every level's union contains the next level's union."""
    for n in range(len(model.levels) - 1):
        w = _uncovered_point(model.levels[n + 1].intervals, model.levels[n].intervals)
        if w is not None:
            return Certificate("nested", False, {"level": n + 1}, witness=w)
    return Certificate("nested", True, {"levels": len(model.levels)})
