"""Certified brackets for generalized Hausdorff measures of balanced systems.

Upper bounds come from the level covers; lower bounds from the mass
distribution inequality mu(I) <= c * g(diam I) checked exactly on a
structured plus seeded-random interval family. ``net_measure_dp`` is an
independent optimum over covers by construction-tree intervals.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .balanced_cantor import LevelSystem, NaturalMeasure, children_map
from .digit_groups import DigitSetSpec, count_prefixes, enumerate_set, value_of
from .exactcore import Interval, IntervalFamily
from .gauge import Gauge, eval_gauge

DEFAULT_FACTOR = Fraction(8)
_RES = 1 << 32


@dataclass(frozen=True)
class BoundCertificate:
    lower: Fraction
    upper: Fraction
    depth: int
    method: str
    passed: bool = True
    witnesses: tuple = ()
    checked: int = 0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0 <= self.lower <= self.upper):
            raise ValueError(f"bracket [{self.lower}, {self.upper}] is not ordered")

    def __bool__(self) -> bool:
        return self.passed


def canonical_upper_bound(system: LevelSystem, g: Gauge, k: int) -> Fraction:
    if not 1 <= k <= system.depth:
        raise ValueError(f"level {k} outside 1..{system.depth}")
    return system.size(k) * eval_gauge(g, system.r(k))


def structured_family(system: LevelSystem, limit: int = 10**5) -> list[Interval]:
    """Every level interval and every interval spanning two consecutive points.

    Past ``limit`` points a regular system is reduced to representatives:
    all level-k intervals carry identical copies of the structure below, so
    one interval per level and one consecutive pair per split level cover
    every distinct configuration.
    """
    if system.node_count() <= limit:
        out = []
        for k in range(1, system.depth + 1):
            pts = system.points(k)
            r = system.r(k)
            out.extend(Interval(x, x + r) for x in pts)
            out.extend(Interval(a, b + r) for a, b in zip(pts, pts[1:]))
        return out
    if not system.is_regular():
        raise ValueError("structured family of a large irregular system is not supported")
    out = []
    for k in range(1, system.depth + 1):
        r = system.r(k)
        out.append(Interval(system.point(k, 0), system.point(k, 0) + r))
        # pair splitting at level l: last descendant of child 0, first of child 1
        for l in range(1, k + 1):
            if system.level(l).n < 2:
                continue
            below = system.size(k) // system.size(l)
            a = system.point(k, below - 1)
            b = system.point(k, below)
            out.append(Interval(a, b + r))
    return out


def random_family(system: LevelSystem, count: int, seed: int) -> list[Interval]:
    """Seeded intervals anchored on the set, diameters between r_K and 1.

    Only integer draws are used, so the family is identical on every
    platform.
    """
    rng = random.Random(seed)
    K = system.depth
    size = system.size(K)
    out = []
    for _ in range(count):
        k = rng.randrange(K)
        hi, lo = system.r(k), system.r(k + 1)
        diam = lo + (hi - lo) * Fraction(rng.randrange(_RES + 1), _RES)
        anchor = system.point(K, rng.randrange(size))
        x = anchor + system.r(K) * Fraction(rng.randrange(_RES + 1), _RES)
        left = x - diam * Fraction(rng.randrange(_RES + 1), _RES)
        out.append(Interval(left, left + diam))
    return out


def mass_distribution_check(system: LevelSystem, g: Gauge, factor: Fraction = DEFAULT_FACTOR,
                            tests: Iterable[Interval] | None = None, random_count: int = 0,
                            seed: int = 0, structured: bool = True) -> BoundCertificate:
    """Exact check of mu(I) <= factor * g(diam I) over a test family.

    The depth-K measure only resolves scales >= r_K, so test intervals
    shorter than r_K are counted but not compared.
    """
    factor = Fraction(factor)
    if factor <= 0:
        raise ValueError("factor must be positive")
    family: list[Interval] = []
    if structured:
        family.extend(structured_family(system))
    if tests is not None:
        family.extend(tests)
    if random_count:
        family.extend(random_family(system, random_count, seed))
    mu = NaturalMeasure(system)
    rK = system.r(system.depth)
    upper = min(canonical_upper_bound(system, g, k) for k in range(1, system.depth + 1))
    checked = skipped = 0
    worst = None
    for I in family:
        d = I.diam
        if d < rK:
            skipped += 1
            continue
        checked += 1
        m = mu(I)
        bound = factor * eval_gauge(g, d)
        if m > bound:
            return BoundCertificate(Fraction(0), max(upper, Fraction(0)), system.depth,
                                    "mass_distribution", False,
                                    ((I, {"mu": m, "bound": bound}),), checked,
                                    {"factor": factor, "below_resolution": skipped})
        if m and (worst is None or m / bound > worst[1]):
            worst = (I, m / bound)
    details = {"factor": factor, "below_resolution": skipped,
               "tightest_ratio": worst[1] if worst else Fraction(0)}
    witnesses = ((worst[0], {"mu_over_bound": worst[1]}),) if worst else ()
    lower = min(1 / factor, upper)
    return BoundCertificate(lower, upper, system.depth, "mass_distribution", True,
                            witnesses, checked, details)


class NodeLimitExceeded(ValueError):
    pass


def net_measure_dp(system: LevelSystem, g: Gauge, max_diam: Fraction,
                   node_limit: int = 10**5) -> Fraction:
    """Minimal sum of g(r_level) over antichains of tree nodes covering all leaves.

    Nodes at levels with r_k > max_diam are not allowed in the cover.
    """
    nodes = system.node_count()
    if nodes > node_limit:
        raise NodeLimitExceeded(f"node limit exceeded: {nodes} > {node_limit}")
    K = system.depth
    cost: list[Fraction | None] = []
    for k in range(K, 0, -1):
        own = eval_gauge(g, system.r(k)) if system.r(k) <= max_diam else None
        size = system.size(k)
        if k == K:
            cost = [own] * size
            if own is None:
                raise ValueError("leaves are longer than max_diam; no admissible cover")
            continue
        kids = children_map(system, k)
        new = []
        for i in range(size):
            sub = sum((cost[c] for c in kids[i]), Fraction(0))
            new.append(sub if own is None else min(own, sub))
        cost = new
    return sum(cost, Fraction(0))


@dataclass(frozen=True)
class BoxRow:
    delta: Fraction
    count: int
    ratio: float | None


def _cells(a: Fraction, b: Fraction, delta: Fraction) -> range:
    """Indices j of the cells [j*delta, (j+1)*delta] a minimal cover of [a, b] uses.

    The same range serves a half-open [a, b).
    """
    lo = math.floor(a / delta)
    hi = math.ceil(b / delta) - 1
    return range(lo, max(lo, hi) + 1)


def box_counting(spec, scales: Sequence[Fraction]) -> list[BoxRow]:
    """Grid cells of side delta meeting a truncation of the set.

    ``spec`` is a LevelSystem (closed intervals at the first level with
    r_k <= delta), an IntervalFamily, or a DigitSetSpec (half-open
    cylinders at the first depth whose cylinder width is <= delta).
    The ratio column is the only floating point output.
    """
    scales = [Fraction(d) for d in scales]
    if any(d <= 0 for d in scales):
        raise ValueError("scales must be positive")
    if any(b >= a for a, b in zip(scales, scales[1:])):
        raise ValueError("scales must be strictly decreasing")
    rows = []
    for delta in scales:
        cells: set[int] = set()
        for a, b in _pieces(spec, delta):
            cells.update(_cells(a, b, delta))
        count = len(cells)
        ratio = None
        if delta < 1 and count:
            ratio = math.log(count) / math.log(1 / delta)
        rows.append(BoxRow(delta, count, ratio))
    return rows


def _pieces(spec, delta: Fraction):
    if isinstance(spec, LevelSystem):
        k = next((k for k in range(1, spec.depth + 1) if spec.r(k) <= delta), spec.depth)
        for I in spec.intervals(k):
            yield I.left, I.right
    elif isinstance(spec, IntervalFamily):
        for I in spec:
            yield I.left, I.right
    elif isinstance(spec, DigitSetSpec):
        base = spec.base
        d = next((d for d in range(1, base.depth + 1) if Fraction(1, base.scale(d)) <= delta),
                 base.depth)
        width = Fraction(1, base.scale(d))
        for v in enumerate_set(spec, d):
            x = value_of(base, v)
            yield x, x + width
    else:
        raise TypeError(f"cannot box-count {type(spec).__name__}")


def davies_box_table(depth: int) -> list[BoxRow]:
    """Box counts of the Davies variant at delta_k = 1/(N_1...N_k), k = 1..depth.

    Counts come from prefix enumeration; :func:`box_counting` on the same
    spec reproduces them cell by cell.
    """
    from .digit_groups import BaseSystem

    spec = DigitSetSpec(BaseSystem.davies_variant(depth))
    rows = []
    for k in range(1, depth + 1):
        delta = Fraction(1, spec.base.scale(k))
        count = count_prefixes(spec, k)
        rows.append(BoxRow(delta, count, math.log(count) / math.log(1 / delta)))
    return rows
