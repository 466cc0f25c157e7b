"""Balanced Cantor-type systems built from grids inside nested open sets.

Level k of a system is a finite set F_k of left endpoints with a common
length r_k; the truncated compact set is the union of [x, x + r_k]. Every
level-k interval holds the same number n_{k+1} of level-(k+1) intervals,
which makes the natural measure uniform: each level-k interval has mass
1/|F_k|.

A level is stored either explicitly (the sorted tuple F) or as a lattice
level: every parent y has the children y + offset + t/m, t = 0..n-1. Grids
over the whole of (0,1) whose m divides the next m always refine into
lattice levels, which is what keeps depth-4 interleaved schedules (m far
beyond 10**100, |F_k| beyond 10**50) tractable.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .exactcore import Certificate, Interval, IntervalFamily, OpenSetModel
from .gauge import Gauge, check_ratio_monotone

SPACING = Fraction(4, 5)
TENTH = Fraction(1, 10)
MATERIALIZE_LIMIT = 2 * 10**6


class BuildError(ValueError):
    def __init__(self, message: str, level: int | None = None):
        self.level = level
        super().__init__(f"level {level}: {message}" if level is not None else message)


class GridInfeasible(BuildError):
    def __init__(self, j: int, m: int):
        self.j = j
        self.m = m
        super().__init__(f"grid infeasible at j={j} (m={m})")


class TooLarge(ValueError):
    pass


def grid_radius(m: int) -> Fraction:
    return Fraction(1, 10 * m * m + 1)


def is_unit_model(G: IntervalFamily) -> bool:
    return len(G) == 1 and G.intervals[0].left == 0 and G.intervals[0].right == 1


class GridSpec:
    """The points x^m_j inside one open set, computed on demand.

    x_j is the leftmost point of the form a_j + i*r/2 (i >= 0, x_j <= b_j),
    where [a_j, b_j] = [j/m - 1/(10m), j/m + 1/(10m)], with [x_j, x_j + r]
    inside one open piece of ``G``.
    """

    def __init__(self, m: int, G: IntervalFamily):
        if m < 1:
            raise ValueError("m must be a positive integer")
        self.m = m
        self.r = grid_radius(m)
        self.pieces = sorted(G.intervals)
        self._cache: dict[int, Fraction] = {}

    def window(self, j: int) -> tuple[Fraction, Fraction]:
        w = Fraction(1, 10 * self.m)
        c = Fraction(j, self.m)
        return c - w, c + w

    def point(self, j: int) -> Fraction:
        if not 1 <= j <= self.m:
            raise IndexError(j)
        x = self._cache.get(j)
        if x is None:
            x = self._scan(j)
            self._cache[j] = x
        return x

    def _scan(self, j: int) -> Fraction:
        a, b = self.window(j)
        step = self.r / 2
        for piece in self.pieces:
            if piece.right <= a:
                continue
            if piece.left >= b:
                break
            i = 0 if a > piece.left else math.floor((piece.left - a) / step) + 1
            x = a + i * step
            if x <= b and x + self.r < piece.right:
                return x
        raise GridInfeasible(j, self.m)

    @property
    def points(self) -> list[Fraction]:
        """All m points. Only sensible for small m."""
        if self.m > MATERIALIZE_LIMIT:
            raise TooLarge(f"grid with m={self.m} is too large to list")
        return [self.point(j) for j in range(1, self.m + 1)]

    def indices_near(self, lo: Fraction, hi: Fraction) -> range:
        """Indices j whose window can hold a point x with lo <= x <= hi."""
        first = max(1, math.ceil(self.m * lo - TENTH))
        last = min(self.m, math.floor(self.m * hi + TENTH))
        return range(first, last + 1)

    def validate(self, enum_cap: int = 10**6) -> Certificate:
        """Check every index j has a point, scanning only windows near gaps.

        A window whose left end a_j and a_j + r fall in one open piece takes
        x_j = a_j at once; only windows touching the complement of ``G``
        need the exact scan.
        """
        gaps = []
        prev = Fraction(-1)
        for piece in self.pieces:
            gaps.append((prev, piece.left))
            prev = piece.right
        gaps.append((prev, Fraction(2)))
        checked = 0
        for u, v in gaps:
            first = max(1, math.floor(self.m * (u - self.r)) - 1)
            last = min(self.m, math.ceil(self.m * (v + self.r)) + 1)
            if first > last:
                continue
            if last - first + 1 > enum_cap:
                # some window lies wholly inside this gap
                j = math.ceil(self.m * u + TENTH)
                raise GridInfeasible(max(j, 1), self.m)
            for j in range(first, last + 1):
                self.point(j)
                checked += 1
        return Certificate("grid", True, {"m": self.m, "r": self.r, "windows_scanned": checked})


def build_grid(m: int, G: IntervalFamily) -> GridSpec:
    """E_m inside G, with every point computed and checked."""
    grid = GridSpec(m, G)
    grid.points
    return grid


@dataclass(frozen=True)
class Level:
    """One level. Either ``F`` (explicit) or ``offset`` (lattice) is set.

    ``aligned`` records that every point is a window-left grid point
    (j - 1/10)/m, which is what lets the next level be a lattice level.
    """

    m: int
    r: Fraction
    F: tuple[Fraction, ...] | None
    n: int
    offset: Fraction | None = None
    aligned: bool = False

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        if (self.F is None) == (self.offset is None):
            raise ValueError("a level is either explicit (F) or lattice (offset)")
        if self.F is not None:
            object.__setattr__(self, "F", tuple(Fraction(x) for x in self.F))
        else:
            object.__setattr__(self, "offset", Fraction(self.offset))

    @property
    def lattice(self) -> bool:
        return self.F is None

    @property
    def step(self) -> Fraction:
        return Fraction(1, self.m)


ROOT = Level(m=1, r=Fraction(1), F=(Fraction(0),), n=1)


@dataclass(frozen=True)
class LevelSystem:
    levels: tuple[Level, ...]
    provenance: OpenSetModel | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        sizes = []
        for k, lv in enumerate(self.levels, start=1):
            if lv.lattice:
                sizes.append((sizes[-1] if sizes else 1) * lv.n)
            else:
                sizes.append(len(lv.F))
        object.__setattr__(self, "_sizes", sizes)
        # _span[k]: largest offset of a depth-K left endpoint below a level-k point
        span = [Fraction(0)] * (len(self.levels) + 1)
        for k in range(len(self.levels) - 1, 0, -1):
            lv = self.levels[k]
            if lv.lattice:
                span[k] = lv.offset + (lv.n - 1) * lv.step + span[k + 1]
            else:
                span[k] = self.levels[k - 1].r - self.levels[-1].r
        object.__setattr__(self, "_span", span)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def r(self, k: int) -> Fraction:
        """r_k for 1 <= k <= depth; r_0 = 1 by convention."""
        return Fraction(1) if k == 0 else self.levels[k - 1].r

    def m(self, k: int) -> int:
        return self.levels[k - 1].m

    def size(self, k: int) -> int:
        """|F_k|; |F_0| = 1 by convention."""
        return 1 if k == 0 else self._sizes[k - 1]

    def level(self, k: int) -> Level:
        return self.levels[k - 1]

    def truncate(self, depth: int) -> LevelSystem:
        return LevelSystem(self.levels[:depth], self.provenance)

    def node_count(self) -> int:
        return sum(self._sizes)

    def is_regular(self) -> bool:
        """Every level-k interval holds a translated copy of the same structure.

        A single explicit first point (the toy root) is allowed.
        """
        first, rest = self.levels[0], self.levels[1:]
        return (first.lattice or len(first.F) == 1) and all(lv.lattice for lv in rest)

    def points(self, k: int, limit: int = MATERIALIZE_LIMIT) -> tuple[Fraction, ...]:
        lv = self.level(k)
        if not lv.lattice:
            return lv.F
        if self.size(k) > limit:
            raise TooLarge(f"level {k} has {self.size(k)} points (limit {limit})")
        parents = self.points(k - 1, limit) if k > 1 else (Fraction(0),)
        rel = [lv.offset + t * lv.step for t in range(lv.n)]
        return tuple(y + d for y in parents for d in rel)

    def point(self, k: int, index: int) -> Fraction:
        """The index-th (0-based, increasing) point of level k."""
        lv = self.level(k)
        if not lv.lattice:
            return lv.F[index]
        parent, t = divmod(index, lv.n)
        base = self.point(k - 1, parent) if k > 1 else Fraction(0)
        return base + lv.offset + t * lv.step

    def intervals(self, k: int, limit: int = MATERIALIZE_LIMIT) -> Iterator[Interval]:
        r = self.r(k)
        for x in self.points(k, limit):
            yield Interval(x, x + r)

    def canonical_cover(self, k: int) -> IntervalFamily:
        return IntervalFamily(tuple(self.intervals(k)))

    def count_le(self, b: Fraction, k: int | None = None, strict: bool = False) -> int:
        """Number of level-k left endpoints <= b (< b when strict)."""
        k = self.depth if k is None else k
        if k == 0:
            return int(0 < b if strict else 0 <= b)
        sub = self if k == self.depth else self.truncate(k)
        return sub._count(b, strict)

    def _count(self, b: Fraction, strict: bool) -> int:
        K = self.depth
        E = max((k for k in range(1, K + 1) if not self.levels[k - 1].lattice), default=0)
        if E == 0:
            return self._count_below(Fraction(0), 1, b, strict)
        F = self.levels[E - 1].F
        span = self._span[E]
        below = self.size(K) // self.size(E)
        cut = b - span
        full = bisect.bisect_left(F, cut) if strict else bisect.bisect_right(F, cut)
        total = full * below
        # at most a couple of partially counted subtrees
        i = full
        while i < len(F) and (F[i] < b if strict else F[i] <= b):
            total += self._count_below(F[i], E + 1, b, strict)
            i += 1
        return total

    def _count_below(self, base: Fraction, k: int, b: Fraction, strict: bool) -> int:
        """Depth-K points below the level-(k-1) node at ``base`` that are <= b."""
        K = self.depth
        if k > K:
            return int(base < b if strict else base <= b)
        lv = self.levels[k - 1]
        span = self._span[k]
        below = self.size(K) // self.size(k)
        # children t with base + offset + t/m + span <= b are counted whole
        room = (b - base - lv.offset - span) * lv.m
        if strict:
            full = math.ceil(room) if room > 0 else 0
        else:
            full = math.floor(room) + 1 if room >= 0 else 0
        full = max(0, min(full, lv.n))
        total = full * below
        if full < lv.n:
            c = base + lv.offset + full * lv.step
            if (c < b) if strict else (c <= b):
                total += self._count_below(c, k + 1, b, strict)
        return total

    def count_in(self, I: Interval, k: int | None = None) -> int:
        return self.count_le(I.right, k) - self.count_le(I.left, k, strict=True)

    def covers(self, x: Fraction, k: int) -> bool:
        """Is x in the union of the level-k intervals [y, y + r_k]?"""
        return self.count_in(Interval(x - self.r(k), x), k) > 0

    def random_index(self, rng: random.Random, k: int) -> int:
        return rng.randrange(self.size(k))


def refine_balanced(parent: Level, grid: GridSpec, parent_points: Sequence[Fraction] | None = None
                    ) -> Level:
    """Children of every parent interval, trimmed to the minimal count.

    Candidates for parent y are grid points x with [x, x+r] inside [y, y+R];
    each parent keeps its n leftmost candidates, n the minimum over parents.
    """
    if not grid.m * parent.r > 2:
        raise BuildError(f"grid too coarse for refinement: m={grid.m} <= 2/r={2 / parent.r}")
    ys = parent.F if parent_points is None else parent_points
    per_parent = []
    for y in ys:
        top = y + parent.r
        cands = []
        for j in grid.indices_near(y, top - grid.r):
            x = grid.point(j)
            if y <= x and x + grid.r <= top:
                cands.append(x)
        per_parent.append(cands)
    n = min(len(c) for c in per_parent)
    if n == 0:
        raise BuildError("refinement empty")
    F = tuple(x for cands in per_parent for x in cands[:n])
    aligned = all((x * grid.m + TENTH).denominator == 1 for x in F)
    return Level(m=grid.m, r=grid.r, F=F, n=n, aligned=aligned)


def lattice_refine(parent: Level, m: int) -> Level:
    """Refinement of an aligned parent level by E_m over (0,1) with m_parent | m.

    Every parent (j' - 1/10)/m' sees the children q j' + u, u in [u0, u1],
    q = m/m', so the pattern is the same for all parents.
    """
    if not m * parent.r > 2:
        raise BuildError(f"grid too coarse for refinement: m={m} <= 2/r={2 / parent.r}")
    q, rem = divmod(m, parent.m)
    if rem or not parent.aligned:
        raise ValueError("lattice refinement needs an aligned parent and m_parent | m")
    r = grid_radius(m)
    u0 = math.ceil(Fraction(1 - q, 10))
    u1 = math.floor(m * (parent.r - r) + Fraction(1 - q, 10))
    n = u1 - u0 + 1
    if n <= 0:
        raise BuildError("refinement empty")
    offset = (u0 - TENTH) / m + Fraction(1, 10 * parent.m)
    return Level(m=m, r=r, F=None, n=n, offset=offset, aligned=True)


def unit_first_level(m: int) -> Level:
    """E_m over (0,1): the window-left points (j - 1/10)/m, j = 1..m."""
    return Level(m=m, r=grid_radius(m), F=None, n=m, offset=(1 - TENTH) / m, aligned=True)


def est_certificate(parent_r: Fraction, m: int, parent_size: int, size: int) -> Certificate:
    """(r_{k-1} m_k / 2)|F_{k-1}| <= |F_k| <= 2 r_{k-1} m_k |F_{k-1}|."""
    lo = parent_r * m / 2 * parent_size
    hi = 2 * parent_r * m * parent_size
    return Certificate("est", lo <= size <= hi, {"lower": lo, "size": size, "upper": hi})


def extend_level(levels: Sequence[Level], model: OpenSetModel, m: int, k: int,
                 enum_cap: int = 10**6) -> Level:
    """Level k given levels 1..k-1: E_m itself for k = 1, else a balanced refinement."""
    G = model.levels[k - 1]
    try:
        if k == 1:
            if is_unit_model(G):
                return unit_first_level(m)
            grid = build_grid(m, G)
            F = tuple(grid.points)
            aligned = all((x * m + TENTH).denominator == 1 for x in F)
            return Level(m=m, r=grid.r, F=F, n=len(F), aligned=aligned)
        parent = levels[-1]
        if is_unit_model(G) and parent.aligned and m % parent.m == 0:
            child = lattice_refine(parent, m)
        else:
            grid = GridSpec(m, G)
            grid.validate(enum_cap)
            prev = LevelSystem(tuple(levels))
            child = refine_balanced(parent, grid, prev.points(k - 1))
    except BuildError as exc:
        raise BuildError(str(exc).split(": ", 1)[-1] if exc.level else str(exc), k) from None
    prev = LevelSystem(tuple(levels) + (child,))
    cert = est_certificate(parent.r, m, prev.size(k - 1), prev.size(k))
    if not cert:
        raise BuildError(f"est bounds fail: {cert.values}", k)
    return child


def build_system(model: OpenSetModel, schedule: Sequence[int], depth: int,
                 enum_cap: int = 10**6) -> LevelSystem:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if len(schedule) < depth:
        raise ValueError(f"schedule has {len(schedule)} values, depth {depth} requested")
    if len(model) < depth:
        raise ValueError(f"model has {len(model)} levels, depth {depth} requested")
    if any(b <= a for a, b in zip(schedule, schedule[1:depth])):
        raise ValueError("schedule must be strictly increasing")
    levels: list[Level] = []
    for k in range(1, depth + 1):
        levels.append(extend_level(levels, model, schedule[k - 1], k, enum_cap))
    system = LevelSystem(tuple(levels), model)
    for cert in certify_system(system, est=True):
        if not cert:
            raise BuildError(f"{cert.name} check failed: {cert.values}", cert.depth)
    return system


def children_map(system: LevelSystem, k: int) -> list[list[int]]:
    """For each level-k index, the indices of its level-(k+1) children."""
    child = system.level(k + 1)
    if child.lattice:
        n = child.n
        return [list(range(i * n, (i + 1) * n)) for i in range(system.size(k))]
    parents = system.points(k)
    R = system.r(k)
    out: list[list[int]] = [[] for _ in parents]
    for ci, x in enumerate(child.F):
        pi = bisect.bisect_right(parents, x) - 1
        if pi >= 0 and x + child.r <= parents[pi] + R:
            out[pi].append(ci)
    return out


def _min_gap(system: LevelSystem, k: int) -> Fraction | None:
    lv = system.level(k)
    if not lv.lattice:
        F = lv.F
        return min((b - a for a, b in zip(F, F[1:])), default=None)
    inner = lv.step if lv.n > 1 else None
    outer = None
    if k > 1:
        pg = _min_gap(system, k - 1)
        if pg is not None:
            outer = pg - (lv.n - 1) * lv.step
    gaps = [g for g in (inner, outer) if g is not None]
    return min(gaps, default=None)


def certify_system(system: LevelSystem, est: bool = False) -> list[Certificate]:
    """Spacing, nesting, balance (and optionally est) for every level."""
    certs = []
    for k, lv in enumerate(system.levels, start=1):
        if lv.lattice:
            ordered = True
        else:
            ordered = all(a < b for a, b in zip(lv.F, lv.F[1:]))
        min_gap = _min_gap(system, k)
        sp_ok = ordered and (min_gap is None or min_gap * lv.m >= SPACING)
        certs.append(Certificate("spacing", sp_ok, {"level": k, "min_gap": min_gap, "m": lv.m},
                                 depth=k))
        if k == 1:
            continue
        if lv.lattice:
            R = system.r(k - 1)
            inside = lv.offset >= 0 and lv.offset + (lv.n - 1) * lv.step + lv.r <= R
            certs.append(Certificate("nesting", inside, {"level": k, "offset": lv.offset},
                                     depth=k))
            certs.append(Certificate("balance", lv.n >= 1, {"level": k, "n": lv.n}, depth=k))
        else:
            kids = children_map(system, k - 1)
            placed = sum(len(c) for c in kids)
            certs.append(Certificate("nesting", placed == len(lv.F),
                                     {"level": k, "placed": placed, "size": len(lv.F)}, depth=k))
            bad = next((i for i, c in enumerate(kids) if len(c) != lv.n), None)
            certs.append(Certificate("balance", bad is None, {"level": k, "n": lv.n},
                                     witness=bad, depth=k))
        if est:
            c = est_certificate(system.r(k - 1), lv.m, system.size(k - 1), system.size(k))
            certs.append(Certificate("est", c.passed, {"level": k, **c.values}, depth=k))
    return certs


def natural_gauge(system: LevelSystem) -> Gauge:
    """Breakpoints (r_k, 1/|F_k|) for k = 1..depth."""
    if system.depth < 1:
        raise ValueError("system has no levels")
    return Gauge(tuple((system.r(k), Fraction(1, system.size(k)))
                       for k in range(1, system.depth + 1)))


class NaturalMeasure:
    """Uniform mass over the depth-K intervals of a balanced system.

    An interval I receives 1/|F_K| for every level-K left endpoint it
    contains (so partially met intervals count iff their left end is in I).
    """

    def __init__(self, system: LevelSystem):
        self.system = system
        self._unit = Fraction(1, system.size(system.depth))

    def count(self, I: Interval) -> int:
        return self.system.count_in(I)

    def __call__(self, I: Interval) -> Fraction:
        return self.count(I) * self._unit


def measure_of_interval(mu: NaturalMeasure | LevelSystem, I: Interval) -> Fraction:
    if isinstance(mu, LevelSystem):
        mu = NaturalMeasure(mu)
    return mu(I)


def additivity_certificate(system: LevelSystem, limit: int = 10**5) -> Certificate:
    """Level intervals of every level carry total mass 1 (sampled past ``limit``)."""
    mu = NaturalMeasure(system)
    for k in range(1, system.depth + 1):
        if system.size(k) <= limit:
            total = sum((mu(I) for I in system.intervals(k)), Fraction(0))
        else:
            # regular levels: every interval has the same mass
            idx = {0, system.size(k) - 1, system.size(k) // 2}
            each = {mu(Interval(system.point(k, i), system.point(k, i) + system.r(k)))
                    for i in idx}
            total = each.pop() * system.size(k) if len(each) == 1 else None
        if total != 1:
            return Certificate("additivity", False, {"level": k, "total": total}, depth=k)
    return Certificate("additivity", True, {"levels": system.depth}, depth=system.depth)


def next_level_doubling(levels: Sequence[Level], model: OpenSetModel, start: int, k: int,
                        accept=None, cap_doublings: int = 2**64) -> tuple[Level, int]:
    """Smallest m = start * 2**t (t <= cap) whose level k builds and is accepted.

    Returns the level and the number of doublings used.
    """
    m = start
    last_err: Exception | None = None
    t = 0
    while t <= cap_doublings:
        if k == 1 or m * levels[-1].r > 2:
            try:
                lv = extend_level(levels, model, m, k)
            except BuildError as exc:
                last_err = exc
            else:
                if (k == 1 or lv.n >= 2) and (accept is None or accept(lv)):
                    return lv, t
        m *= 2
        t += 1
    raise BuildError(f"doubling cap exceeded (last error: {last_err})", k)


def auto_schedule(model: OpenSetModel, depth: int, m1: int = 4,
                  cap_doublings: int = 2**64) -> LevelSystem:
    """A system whose m-values double until every level certifies.

    Each accepted level keeps the natural gauge strictly increasing with
    g(x)/x strictly increasing as x decreases.
    """
    levels: list[Level] = []
    for k in range(1, depth + 1):
        start = m1 if k == 1 else 2 * levels[-1].m

        def accept(lv: Level, prev=tuple(levels)) -> bool:
            if not prev:
                return True
            g = natural_gauge(LevelSystem(prev + (lv,)))
            return check_ratio_monotone(g).passed

        lv, _ = next_level_doubling(levels, model, start, k, accept, cap_doublings)
        levels.append(lv)
    system = LevelSystem(tuple(levels), model)
    for cert in certify_system(system, est=True):
        if not cert:
            raise BuildError(f"{cert.name} check failed", cert.depth)
    return system


def regular_system(branching: Sequence[int], explicit: bool = False) -> LevelSystem:
    """A toy system under the artificial root F = {0}, r = 1.

    Children of [y, y + R] sit at y + iR/b with length R/(3b); the grid
    parameter m is b/R so the spacing is exactly 1/m.
    """
    levels = [ROOT]
    for b in branching:
        if b < 1:
            raise ValueError("branching must be positive")
        R = levels[-1].r
        m = b / R
        if m.denominator != 1:
            raise ValueError("toy system needs b/R integral")
        levels.append(Level(m=int(m), r=R / (3 * b), F=None, n=b, offset=Fraction(0)))
    system = LevelSystem(tuple(levels))
    if explicit:
        system = materialize(system)
    return system


def materialize(system: LevelSystem, limit: int = MATERIALIZE_LIMIT) -> LevelSystem:
    """Same system with every level stored explicitly."""
    levels = []
    for k, lv in enumerate(system.levels, start=1):
        F = system.points(k, limit)
        levels.append(Level(m=lv.m, r=lv.r, F=F, n=lv.n, aligned=lv.aligned))
    return LevelSystem(tuple(levels), system.provenance)
