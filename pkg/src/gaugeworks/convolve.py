"""Finitely supported measures, their sum-pushforward, and the translate pigeonhole."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .exactcore import InputError, to_rational

DEFAULT_CAP = 10**6


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class DiscreteMeasure:
    """Point masses with positive rational weights, sorted by point."""

    support: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = tuple(sorted((Fraction(x), Fraction(w)) for x, w in self.support))
        for i, (x, w) in enumerate(pts):
            if w <= 0:
                raise InputError(f"weight {w} at {x} is not positive", f"support[{i}]")
            if i and pts[i - 1][0] == x:
                raise InputError(f"point {x} listed twice", f"support[{i}]")
        object.__setattr__(self, "support", pts)

    @classmethod
    def of(cls, pairs: Iterable[tuple]) -> DiscreteMeasure:
        return cls(tuple((to_rational(x), to_rational(w)) for x, w in pairs))

    @classmethod
    def point(cls, x=0) -> DiscreteMeasure:
        return cls(((Fraction(x), Fraction(1)),))

    @classmethod
    def uniform(cls, points: Iterable) -> DiscreteMeasure:
        pts = sorted(set(Fraction(p) for p in points))
        return cls(tuple((p, Fraction(1, len(pts))) for p in pts))

    @property
    def mass(self) -> Fraction:
        return sum((w for _, w in self.support), Fraction(0))

    @property
    def points(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.support)

    def weight(self, x) -> Fraction:
        x = Fraction(x)
        return next((w for p, w in self.support if p == x), Fraction(0))

    def __len__(self) -> int:
        return len(self.support)


def _convolve2(a: DiscreteMeasure, b: DiscreteMeasure) -> DiscreteMeasure:
    acc: dict[Fraction, Fraction] = defaultdict(Fraction)
    for x, w in a.support:
        for y, v in b.support:
            acc[x + y] += w * v
    return DiscreteMeasure(tuple(acc.items()))


def pushforward_sum(measures: Sequence[DiscreteMeasure], cap: int = DEFAULT_CAP
                    ) -> DiscreteMeasure:
    """The image of the product measure under (x_1, ..., x_n) -> x_1 + ... + x_n."""
    if not measures:
        raise ValueError("need at least one measure")
    tuples = math.prod(len(m) for m in measures)
    if tuples > cap:
        raise CapExceeded(f"cap exceeded: {tuples} tuples > {cap}")
    return reduce(_convolve2, measures)


@dataclass(frozen=True)
class PigeonholeReport:
    masses: tuple[tuple[Fraction, ...], ...]   # [translate][part]
    choice: tuple[int, ...]                     # part chosen for each translate
    hits: tuple[int, ...]                       # translates choosing each part
    best_part: int
    guaranteed: int
    note: str = "finite analogue of the sigma-finiteness contradiction"

    @property
    def passed(self) -> bool:
        return self.hits[self.best_part] >= self.guaranteed


def pigeonhole_translates(K: DiscreteMeasure, translates: Sequence, parts: Sequence[Iterable]
                          ) -> PigeonholeReport:
    """For each translate t pick a part receiving positive mass from K + t.

    ``parts`` must partition the union of the translated supports. The part
    picked by the most translates is hit at least ceil(T/P) times.
    """
    translates = [Fraction(t) for t in translates]
    part_sets = [frozenset(Fraction(x) for x in p) for p in parts]
    if not translates or not part_sets:
        raise ValueError("need at least one translate and one part")
    owner: dict[Fraction, int] = {}
    for i, p in enumerate(part_sets):
        for x in p:
            if x in owner:
                raise InputError(f"point {x} lies in parts {owner[x]} and {i}", "parts")
            owner[x] = i
    union = {x + t for t in translates for x in K.points}
    for x in sorted(union):
        if x not in owner:
            raise InputError(f"point {x} of the translates is in no part", "parts")
    stray = sorted(set(owner) - union)
    if stray:
        raise InputError(f"point {stray[0]} of a part lies in no translate", "parts")
    masses, choice = [], []
    for t in translates:
        row = [Fraction(0)] * len(part_sets)
        for x, w in K.support:
            row[owner[x + t]] += w
        masses.append(tuple(row))
        choice.append(max(range(len(row)), key=lambda j: (row[j], -j)))
    hits = [choice.count(j) for j in range(len(part_sets))]
    best = max(range(len(hits)), key=lambda j: (hits[j], -j))
    guaranteed = -(-len(translates) // len(part_sets))
    return PigeonholeReport(tuple(masses), tuple(choice), tuple(hits), best, guaranteed)
