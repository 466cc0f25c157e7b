"""Piecewise-linear gauge functions with exact rational breakpoints."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactcore import Certificate, InputError, to_rational

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Gauge:
    """g(0) = 0, linear between breakpoints, linear extension past the largest.

    ``breakpoints`` are ``(x, y)`` pairs with x strictly decreasing toward 0.
    Above the largest x the last segment's slope continues (for a single
    breakpoint that is the segment from the origin).
    """

    breakpoints: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        if not pts:
            raise InputError("a gauge needs at least one breakpoint", "breakpoints")
        for i, (x, y) in enumerate(pts):
            if x <= 0 or y <= 0:
                raise InputError(f"breakpoint ({x}, {y}) must be positive", f"breakpoints[{i}]")
            if i and not (x < pts[i - 1][0]):
                raise InputError("x must be strictly decreasing", f"breakpoints[{i}]")
            if i and not (y < pts[i - 1][1]):
                raise InputError("y must be strictly increasing in x", f"breakpoints[{i}]")
        # ascending copies for bisection
        object.__setattr__(self, "_xs", [x for x, _ in reversed(pts)])
        object.__setattr__(self, "_ys", [y for _, y in reversed(pts)])

    @classmethod
    def of(cls, *pairs) -> Gauge:
        return cls(tuple((to_rational(x), to_rational(y)) for x, y in pairs))

    @property
    def x_max(self) -> Fraction:
        return self.breakpoints[0][0]

    def ascending(self) -> list[Point]:
        """Breakpoints with the origin prepended, in increasing x."""
        return [(Fraction(0), Fraction(0))] + list(zip(self._xs, self._ys))

    def slopes(self) -> list[Fraction]:
        """Segment slopes in increasing-x order, starting at the origin segment."""
        pts = self.ascending()
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(pts, pts[1:])]

    def __call__(self, x: Fraction) -> Fraction:
        return eval_gauge(self, x)


def eval_gauge(g: Gauge, x: Fraction) -> Fraction:
    x = Fraction(x)
    if x < 0:
        raise ValueError("gauges are evaluated at x >= 0 only")
    if x == 0:
        return Fraction(0)
    xs, ys = g._xs, g._ys
    i = bisect.bisect_left(xs, x)
    if i < len(xs) and xs[i] == x:
        return ys[i]
    if i == 0:
        return ys[0] * x / xs[0]
    if i == len(xs):
        # past the largest breakpoint: keep the last segment's slope
        x0, y0 = (xs[-2], ys[-2]) if len(xs) > 1 else (Fraction(0), Fraction(0))
        x1, y1 = xs[-1], ys[-1]
    else:
        x0, y0, x1, y1 = xs[i - 1], ys[i - 1], xs[i], ys[i]
    return y0 + (x - x0) * (y1 - y0) / (x1 - x0)


def _line(g: Gauge, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """(slope, intercept) of g on [a, b], assuming g is linear there."""
    ya, yb = eval_gauge(g, a), eval_gauge(g, b)
    s = (yb - ya) / (b - a)
    return s, ya - s * a


def _crossing(l1, l2) -> Fraction | None:
    (s1, c1), (s2, c2) = l1, l2
    if s1 == s2:
        return None
    return (c2 - c1) / (s1 - s2)


def pointwise_min(g1: Gauge, g2: Gauge) -> Gauge:
    """Exact min(g1, g2) as a gauge; crossing points become breakpoints."""
    knots = sorted({x for x, _ in g1.breakpoints} | {x for x, _ in g2.breakpoints})
    cuts = [Fraction(0)] + knots
    xs = set(knots)
    for a, b in zip(cuts, cuts[1:]):
        x = _crossing(_line(g1, a, b), _line(g2, a, b))
        if x is not None and a < x < b:
            xs.add(x)
    top = knots[-1]
    x = _crossing(_line(g1, top, top + 1), _line(g2, top, top + 1))
    if x is not None and x >= top:
        # a breakpoint past the crossing so the extension follows the new min
        xs.update((x, 2 * x))
    pts = []
    for x in sorted(xs, reverse=True):
        y = min(eval_gauge(g1, x), eval_gauge(g2, x))
        pts.append((x, y))
    return Gauge(tuple(pts))


def scale(g: Gauge, c: Fraction) -> Gauge:
    c = Fraction(c)
    if c <= 0:
        raise ValueError("scale factor must be positive")
    return Gauge(tuple((x, c * y) for x, y in g.breakpoints))


def check_ratio_monotone(g: Gauge) -> Certificate:
    """g(x)/x must strictly increase as x decreases over the breakpoints."""
    pts = g.breakpoints
    for (xa, ya), (xb, yb) in zip(pts, pts[1:]):
        if not ya / xa < yb / xb:
            return Certificate("ratio_monotone", False,
                               {"ratios": [ya / xa, yb / xb]}, witness=((xa, ya), (xb, yb)))
    return Certificate("ratio_monotone", True, {"breakpoints": len(pts)})


def check_concave(g: Gauge) -> Certificate:
    """Slopes (origin segment first) must be nonincreasing in x."""
    pts = g.ascending()
    slopes = g.slopes()
    for i in range(len(slopes) - 1):
        if slopes[i + 1] > slopes[i]:
            return Certificate("concave", False, {"slopes": [slopes[i], slopes[i + 1]]},
                               witness=(pts[i], pts[i + 1], pts[i + 2]))
    return Certificate("concave", True, {"segments": len(slopes)})


def check_monotone_on(g: Gauge, samples: Iterable[Fraction]) -> Certificate:
    xs = sorted(set(Fraction(x) for x in samples))
    vals = [eval_gauge(g, x) for x in xs]
    for i in range(len(xs) - 1):
        if vals[i] > vals[i + 1]:
            return Certificate("monotone", False, witness=(xs[i], xs[i + 1]))
    return Certificate("monotone", True, {"samples": len(xs)})


def dominated(g: Gauge, h: Gauge, at: Sequence[Fraction]) -> bool:
    """True iff g <= h at every listed diameter."""
    return all(eval_gauge(g, x) <= eval_gauge(h, x) for x in at)
