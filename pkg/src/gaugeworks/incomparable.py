"""Two interleaved balanced systems whose natural gauges are incomparable.

Each g_i gives its own system positive finite mass, while g = min(g1, g2)
annihilates a prescribed null cover. Covers are split by diameter bands
and the finite-horizon limsup classification of sample points is reported.
"""

from __future__ import annotations

import bisect
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .balanced_cantor import (BuildError, Level, LevelSystem, TooLarge, extend_level,
                              natural_gauge)
from .exactcore import Certificate, Interval, IntervalFamily, OpenSetModel, validate_nested
from .gauge import Gauge, check_ratio_monotone, eval_gauge, pointwise_min, scale
from .hausdorff_bounds import BoundCertificate, canonical_upper_bound, mass_distribution_check


class ScheduleError(BuildError):
    pass


@dataclass(frozen=True)
class LevelCover:
    """The canonical level-k cover of a system: |F_k| intervals of length r_k."""

    system: LevelSystem
    k: int
    label: str = ""

    @property
    def diam(self) -> Fraction:
        return self.system.r(self.k)

    @property
    def count(self) -> int:
        return self.system.size(self.k)

    def total_length(self) -> Fraction:
        return self.count * self.diam

    def classes(self) -> list[tuple[Fraction, int]]:
        return [(self.diam, self.count)]

    def covers(self, x: Fraction) -> bool:
        return self.system.covers(x, self.k)

    def __repr__(self) -> str:
        return f"LevelCover({self.label or 'system'}, k={self.k}, size={self.count})"


Piece = Union[IntervalFamily, LevelCover]


def _classes(piece: Piece) -> list[tuple[Fraction, int]]:
    if isinstance(piece, LevelCover):
        return piece.classes()
    return sorted(Counter(I.diam for I in piece).items())


def _covers(piece: Piece, x: Fraction) -> bool:
    if isinstance(piece, LevelCover):
        return piece.covers(x)
    return any(I.contains_point(x) for I in piece)


@dataclass(frozen=True)
class NullCover:
    """Rounds of intervals; round k is the k-th covering pass.

    A round is a tuple of pieces, each an IntervalFamily or a LevelCover.
    """

    rounds: tuple[tuple[Piece, ...], ...] = ()

    def __post_init__(self):
        rounds = []
        for rnd in self.rounds:
            if isinstance(rnd, (IntervalFamily, LevelCover)):
                rnd = (rnd,)
            rounds.append(tuple(rnd))
        object.__setattr__(self, "rounds", tuple(rounds))

    @classmethod
    def of(cls, *rounds: Iterable[tuple]) -> NullCover:
        return cls(tuple((IntervalFamily.of(*rnd),) for rnd in rounds))

    def pieces(self) -> Iterable[Piece]:
        for rnd in self.rounds:
            yield from rnd

    def classes(self) -> list[tuple[Fraction, int]]:
        acc: Counter = Counter()
        for p in self.pieces():
            for d, mult in _classes(p):
                acc[d] += mult
        return sorted(acc.items())

    @property
    def total_length(self) -> Fraction:
        return sum((d * mult for d, mult in self.classes()), Fraction(0))

    def merged(self, extra: Sequence[Piece]) -> NullCover:
        return NullCover(self.rounds + tuple((p,) for p in extra))


def random_null_cover(seed: int, rounds: int = 4, per_round: int = 5,
                      total: Fraction = Fraction(1, 100)) -> NullCover:
    """Seeded cover; round k has per_round intervals of total length total/2**k."""
    rng = random.Random(seed)
    res = 1 << 20
    out = []
    for k in range(1, rounds + 1):
        budget = Fraction(total, 2**k * per_round)
        fam = []
        for _ in range(per_round):
            d = budget * Fraction(rng.randrange(1, res + 1), res)
            left = (1 - d) * Fraction(rng.randrange(res + 1), res)
            fam.append(Interval(left, left + d))
        out.append((IntervalFamily(tuple(fam)),))
    return NullCover(tuple(out))


class CoverTail:
    """c(delta): total length of cover intervals of diameter <= delta."""

    def __init__(self, classes: Iterable[tuple[Fraction, int]]):
        acc: Counter = Counter()
        for d, mult in classes:
            acc[d] += mult
        self._diams = sorted(acc)
        self._prefix = [Fraction(0)]
        for d in self._diams:
            self._prefix.append(self._prefix[-1] + d * acc[d])

    def __call__(self, delta: Fraction) -> Fraction:
        return self._prefix[bisect.bisect_right(self._diams, delta)]


def rho(system: LevelSystem, g: Gauge, k: int) -> Fraction:
    """rho_k = r_{k-1} g(r_k)/g(r_{k-1}), with r_0 = 1 and g(r_0) = 1."""
    top = Fraction(1) if k == 1 else eval_gauge(g, system.r(k - 1))
    return system.r(k - 1) * eval_gauge(g, system.r(k)) / top


def _rho_list(system: LevelSystem) -> list[Fraction]:
    # natural gauge: g(r_k) = 1/|F_k|
    return [system.r(k - 1) * system.size(k - 1) / system.size(k)
            for k in range(1, system.depth + 1)]


def schedule_inequalities(s1: LevelSystem, s2: LevelSystem, rho1: Sequence[Fraction],
                          rho2: Sequence[Fraction], c) -> list[Certificate]:
    """Every scheduling inequality whose terms are defined at the built depths.

    Indices start at 1 with the conventions r_0 = 1 and rho_1 = 1/|F_1|.
    """
    a, b = s1.depth, s2.depth
    r1 = lambda k: s1.r(k)  # noqa: E731
    r2 = lambda k: s2.r(k)  # noqa: E731
    p1 = lambda k: rho1[k - 1] if 1 <= k <= len(rho1) else None  # noqa: E731
    p2 = lambda k: rho2[k - 1] if 1 <= k <= len(rho2) else None  # noqa: E731
    out: list[Certificate] = []

    def less(name, k, lhs, rhs, terms):
        if None in (lhs, rhs):
            return
        out.append(Certificate(name, lhs < rhs, {"k": k, "terms": terms, "lhs": lhs, "rhs": rhs},
                               depth=k))

    top = max(a, b)
    for k in range(1, top + 1):
        r1k = r1(k) if k <= a else None
        r2k = r2(k) if k <= b else None
        r2prev = r2(k - 1) if k - 1 <= b else None
        less("cover", k, p2(k + 1), p1(k + 1), "rho2[k+1] < rho1[k+1]")
        less("cover", k, p1(k + 1), r2k, "rho1[k+1] < r2[k]")
        less("cover", k, r2k, r1k, "r2[k] < r1[k]")
        less("cover", k, p1(k + 1), p2(k), "rho1[k+1] < rho2[k]")
        less("cover", k, p2(k), r1k, "rho2[k] < r1[k]")
        less("cover", k, r1k, r2prev, "r1[k] < r2[k-1]")
        bound = Fraction(1, 2**k)
        if p1(k + 1) is not None and r2k is not None:
            v = c(p1(k + 1)) / r2k
            out.append(Certificate("m2klarge", v <= bound, {"k": k, "value": v, "bound": bound},
                                   depth=k))
        if p2(k + 1) is not None and k + 1 <= a:
            v = c(p2(k + 1)) / r1(k + 1)
            out.append(Certificate("m1klarge", v <= bound, {"k": k, "value": v, "bound": bound},
                                   depth=k))
    for i, (s, p) in enumerate(((s1, rho1), (s2, rho2)), start=1):
        if s.depth == 0:
            continue
        sizes_ok = all(s.size(k) < s.size(k + 1) for k in range(1, s.depth))
        if sizes_ok:
            cert = check_ratio_monotone(natural_gauge(s))
            out.append(Certificate("ratio_monotone", cert.passed, {"system": i, **cert.values},
                                   cert.witness))
        else:
            out.append(Certificate("ratio_monotone", False, {"system": i, "reason": "sizes"}))
        for k in range(1, s.depth + 1):
            ok = s.r(k) < p[k - 1] < s.r(k - 1)
            out.append(Certificate("rho_bracket", ok, {"system": i, "k": k, "rho": p[k - 1]},
                                   depth=k))
    return out


@dataclass
class InterleavedSchedule:
    m1: list[int]
    m2: list[int]
    rho1: list[Fraction]
    rho2: list[Fraction]
    systems: tuple[LevelSystem, LevelSystem]
    gauges: tuple[Gauge, Gauge]
    certificates: list[Certificate]
    cover: NullCover
    doublings: list[int] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return self.systems[0].depth

    @property
    def passed(self) -> bool:
        return all(self.certificates)

    def canonical_pieces(self) -> list[LevelCover]:
        out = []
        for i, s in enumerate(self.systems, start=1):
            out.extend(LevelCover(s, k, f"F{i}") for k in range(1, s.depth + 1))
        return out


def schedule_scales(model: OpenSetModel, cover: NullCover, depth: int, m_start: int = 4,
                    self_cover: bool = False, cap_doublings: int = 2**64) -> InterleavedSchedule:
    """Alternately extend system 1 and system 2, doubling m until all checks pass.

    With ``self_cover`` the canonical covers of every built level join the
    cover (the case A' = A u B); the returned schedule records the merged
    cover.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if len(model) < depth:
        raise ValueError(f"model has {len(model)} levels, depth {depth} requested")
    nested = validate_nested(model)
    if not nested:
        raise ScheduleError(f"model is not nested (witness {nested.witness})")
    base = list(cover.classes())
    levels: tuple[list[Level], list[Level]] = ([], [])
    doublings = []
    prev_m = None
    for k in range(1, depth + 1):
        for i in (0, 1):
            start = m_start if prev_m is None else 2 * prev_m
            lv, t = _search(model, cover, base, levels, i, k, start, self_cover, cap_doublings)
            levels[i].append(lv)
            doublings.append(t)
            prev_m = lv.m
    s1, s2 = (LevelSystem(tuple(ls), model) for ls in levels)
    pieces = [LevelCover(s, k, f"F{i}") for i, s in enumerate((s1, s2), start=1)
              for k in range(1, depth + 1)]
    final = cover.merged(pieces) if self_cover else cover
    c = CoverTail(final.classes())
    rho1, rho2 = _rho_list(s1), _rho_list(s2)
    certs = schedule_inequalities(s1, s2, rho1, rho2, c)
    bad = next((x for x in certs if not x), None)
    if bad is not None:
        raise ScheduleError(f"final check failed: {bad.name} {bad.values}", bad.depth)
    return InterleavedSchedule([lv.m for lv in levels[0]], [lv.m for lv in levels[1]],
                               rho1, rho2, (s1, s2), (natural_gauge(s1), natural_gauge(s2)),
                               certs, final, doublings)


def _search(model, cover, base, levels, i, k, start, self_cover, cap):
    m = start
    last = None
    t = 0
    while t <= cap:
        trial = [list(levels[0]), list(levels[1])]
        try:
            if k > 1 and not m * trial[i][-1].r > 2:
                raise BuildError("grid too coarse for refinement", k)
            lv = extend_level(trial[i], model, m, k)
            if k > 1 and lv.n < 2:
                raise BuildError("fewer than two children per parent", k)
        except TooLarge as exc:
            raise ScheduleError(f"system {i + 1}: {exc}", k) from None
        except BuildError as exc:
            last = str(exc)
        else:
            trial[i].append(lv)
            s1, s2 = (LevelSystem(tuple(ls)) for ls in trial)
            classes = list(base)
            if self_cover:
                for s in (s1, s2):
                    classes.extend((s.r(j), s.size(j)) for j in range(1, s.depth + 1))
            certs = schedule_inequalities(s1, s2, _rho_list(s1), _rho_list(s2),
                                          CoverTail(classes))
            failing = [x for x in certs if not x]
            if not failing:
                return lv, t
            last = f"{failing[0].name} {failing[0].values.get('terms', '')}".strip()
        m *= 2
        t += 1
    raise ScheduleError(f"doubling cap exceeded for system {i + 1} (last: {last})", k)


@dataclass(frozen=True)
class NullCertificate:
    passed: bool
    sums: list[tuple[int, Fraction, Fraction]]  # (k, band-1 sum, band-2 sum)
    bounds: list[Fraction]
    tails: list[tuple[int, Fraction, Fraction]]  # (n, actual tail, 2^{-n+4})
    unbanded: Fraction
    consistency: list[Certificate]
    violation: tuple | None = None

    def __bool__(self) -> bool:
        return self.passed


def band_edges(rho1: Sequence[Fraction], rho2: Sequence[Fraction]
               ) -> list[tuple[int, int, Fraction, Fraction]]:
    """(k, band, low, high) with band 1 = (rho2_k, rho1_k], band 2 = (rho1_{k+1}, rho2_k]."""
    K = len(rho1)
    out = []
    for k in range(1, K + 1):
        nxt = rho1[k] if k < K else Fraction(0)
        out.append((k, 1, rho2[k - 1], rho1[k - 1]))
        out.append((k, 2, nxt, rho2[k - 1]))
    return out


def band_of(d: Fraction, edges) -> tuple[int, int] | None:
    for k, b, lo, hi in edges:
        if lo < d <= hi:
            return k, b
    return None


def verify_null(schedule: InterleavedSchedule, cover: NullCover | None = None) -> NullCertificate:
    """Band sums of g = min(g1, g2) over the cover, each at most 2^{-k+2}.

    rho values are recomputed from the gauges and must match the stored
    ones; intervals longer than rho1_1 lie outside every band and are only
    reported.
    """
    cover = schedule.cover if cover is None else cover
    s1, s2 = schedule.systems
    g1, g2 = schedule.gauges
    consistency = []
    for i, (s, g, stored) in enumerate(((s1, g1, schedule.rho1), (s2, g2, schedule.rho2)),
                                       start=1):
        for k in range(1, s.depth + 1):
            fresh = rho(s, g, k)
            consistency.append(Certificate("rho_consistency", fresh == stored[k - 1],
                                           {"system": i, "k": k, "stored": stored[k - 1],
                                            "recomputed": fresh}, depth=k))
    g = pointwise_min(g1, g2)
    edges = band_edges(schedule.rho1, schedule.rho2)
    K = len(schedule.rho1)
    sums = {(k, b): Fraction(0) for k, b, _, _ in edges}
    unbanded = Fraction(0)
    for d, mult in cover.classes():
        kb = band_of(d, edges)
        if kb is None:
            if d > schedule.rho1[0]:
                unbanded += mult * eval_gauge(g, d)
            continue
        sums[kb] += mult * eval_gauge(g, d)
    rows, bounds = [], []
    violation = None
    for k in range(1, K + 1):
        bound = Fraction(4, 2**k)
        rows.append((k, sums[k, 1], sums[k, 2]))
        bounds.append(bound)
        for b in (1, 2):
            if violation is None and sums[k, b] > bound:
                violation = (k, b, sums[k, b])
    tails = []
    for n in range(1, K + 1):
        actual = sum((s1_ + s2_ for k, s1_, s2_ in rows if k >= n), Fraction(0))
        tails.append((n, actual, Fraction(16, 2**n)))
    ok = violation is None and all(consistency)
    if violation is None and not all(consistency):
        bad = next(c for c in consistency if not c)
        violation = ("rho_consistency", bad.values["system"], bad.values["k"])
    return NullCertificate(ok, rows, bounds, tails, unbanded, consistency, violation)


def reverify(schedule: InterleavedSchedule, cover: NullCover | None = None) -> list[Certificate]:
    """Independent pass: rho from gauge evaluations, c by direct summation."""
    cover = schedule.cover if cover is None else cover
    s1, s2 = schedule.systems
    g1, g2 = schedule.gauges
    flat: list[tuple[Fraction, int]] = []
    for p in cover.pieces():
        if isinstance(p, LevelCover):
            flat.append((p.diam, p.count))
        else:
            flat.extend((I.diam, 1) for I in p)

    def c(delta):
        return sum((d * m for d, m in flat if d <= delta), Fraction(0))

    rho1 = [rho(s1, g1, k) for k in range(1, s1.depth + 1)]
    rho2 = [rho(s2, g2, k) for k in range(1, s2.depth + 1)]
    certs = schedule_inequalities(s1, s2, rho1, rho2, c)
    certs.append(Certificate("rho_match", rho1 == schedule.rho1 and rho2 == schedule.rho2))
    return certs


@dataclass(frozen=True)
class CoverSplit:
    rounds: tuple[tuple[tuple[Piece, ...], tuple[Piece, ...]], ...]
    sums: tuple[Fraction, ...] = ()
    mode: str = "lemma"

    def family(self, k: int, which: int) -> tuple[Piece, ...]:
        return self.rounds[k - 1][which - 1]


def _split_piece(piece: Piece, to_first) -> tuple[list[Piece], list[Piece]]:
    if isinstance(piece, LevelCover):
        return ([piece], []) if to_first(piece.diam) else ([], [piece])
    a = [I for I in piece if to_first(I.diam)]
    b = [I for I in piece if not to_first(I.diam)]
    return [IntervalFamily(tuple(a))] if a else [], [IntervalFamily(tuple(b))] if b else []


def split_cover(rounds: NullCover, g1: Gauge, g2: Gauge,
                schedule: InterleavedSchedule | None = None) -> CoverSplit:
    """Split every round into a g1-family and a g2-family.

    With a schedule the diameter bands of round k decide, falling back to the
    comparator outside the bands. Without one (lemma mode) an interval goes
    to family 1 iff g1(diam) <= g2(diam), and each round must satisfy
    sum of min(g1, g2) < 2^{-k}.
    """

    def cheaper(d):
        return eval_gauge(g1, d) <= eval_gauge(g2, d)

    out, sums = [], []
    for k, rnd in enumerate(rounds.rounds, start=1):
        if schedule is not None:
            K = len(schedule.rho1)
            lo1, hi1 = (schedule.rho2[k - 1], schedule.rho1[k - 1]) if k <= K else (None, None)
            lo2 = schedule.rho1[k] if k < K else Fraction(0)

            def rule(d, lo1=lo1, hi1=hi1, lo2=lo2):
                if lo1 is not None and lo1 < d <= hi1:
                    return True
                if lo1 is not None and lo2 < d <= lo1:
                    return False
                return cheaper(d)
        else:
            rule = cheaper
        fam1: list[Piece] = []
        fam2: list[Piece] = []
        for piece in rnd:
            a, b = _split_piece(piece, rule)
            fam1 += a
            fam2 += b
        total = sum((m * eval_gauge(g1, d) for p in fam1 for d, m in _classes(p)), Fraction(0))
        total += sum((m * eval_gauge(g2, d) for p in fam2 for d, m in _classes(p)), Fraction(0))
        if schedule is None and not total < Fraction(1, 2**k):
            raise ValueError(f"round {k}: min-gauge sum {total} is not below 2^-{k}")
        out.append((tuple(fam1), tuple(fam2)))
        sums.append(total)
    return CoverSplit(tuple(out), tuple(sums), "bands" if schedule is not None else "lemma")


def check_partition(rounds: NullCover, split: CoverSplit) -> Certificate:
    """Each round equals family 1 plus family 2 as a multiset of intervals."""

    def bag(pieces):
        acc: Counter = Counter()
        for p in pieces:
            if isinstance(p, LevelCover):
                acc[("level", id(p.system), p.k)] += 1
            else:
                acc.update(p)
        return acc

    for k, (rnd, (a, b)) in enumerate(zip(rounds.rounds, split.rounds), start=1):
        left, right = bag(a), bag(b)
        if left & right or left + right != bag(rnd):
            return Certificate("partition", False, {"round": k}, depth=k)
    if len(rounds.rounds) != len(split.rounds):
        return Certificate("partition", False, {"rounds": len(split.rounds)})
    return Certificate("partition", True, {"rounds": len(split.rounds)})


def lemma_rounds(schedule: InterleavedSchedule, cover: NullCover | None = None) -> NullCover:
    """Rounds for lemma mode: round n holds every piece from bands k >= s(n).

    s(n) is the least band index whose exact tail sum of min(g1, g2) is
    below 2^{-n}; a round may be empty.
    """
    cover = schedule.cover if cover is None else cover
    g = pointwise_min(*schedule.gauges)
    edges = band_edges(schedule.rho1, schedule.rho2)
    K = len(schedule.rho1)
    banded: dict[int, list[Piece]] = {k: [] for k in range(1, K + 1)}
    weight = {k: Fraction(0) for k in range(1, K + 1)}
    for piece in cover.pieces():
        if isinstance(piece, LevelCover):
            kb = band_of(piece.diam, edges)
            if kb:
                banded[kb[0]].append(piece)
                weight[kb[0]] += piece.count * eval_gauge(g, piece.diam)
            continue
        by_band: dict[int, list[Interval]] = {}
        for I in piece:
            kb = band_of(I.diam, edges)
            if kb:
                by_band.setdefault(kb[0], []).append(I)
                weight[kb[0]] += eval_gauge(g, I.diam)
        for k, ivs in by_band.items():
            banded[k].append(IntervalFamily(tuple(ivs)))
    out = []
    for n in range(1, K + 1):
        s = next((s for s in range(1, K + 2)
                  if sum((weight[k] for k in range(s, K + 1)), Fraction(0)) < Fraction(1, 2**n)),
                 K + 1)
        out.append(tuple(p for k in range(s, K + 1) for p in banded[k]))
    return NullCover(tuple(out))


@dataclass
class PartitionReport:
    labels: dict
    horizon: int
    band_sums: list = field(default_factory=list)
    factors: tuple = ()
    brackets: tuple = ()
    certificates: dict = field(default_factory=dict)
    null: NullCertificate | None = None
    schedule: InterleavedSchedule | None = None

    @property
    def passed(self) -> bool:
        ok = all(bool(c) for c in self.certificates.values())
        ok = ok and all(bool(b) for b in self.brackets)
        return ok and (self.null is None or bool(self.null))


def classify_points(samples: Sequence[Fraction], split: CoverSplit, horizon: int | None = None,
                    names: tuple[str, str] = ("B1", "B2")) -> PartitionReport:
    """x goes to the first class iff for every n <= N some k in [n, N] has x in family 1."""
    N = len(split.rounds) if horizon is None else horizon
    if N > len(split.rounds):
        raise ValueError(f"horizon {N} exceeds the {len(split.rounds)} rounds")
    labels = {}
    for x in samples:
        x = Fraction(x)
        hit = [any(_covers(p, x) for p in split.family(k, 1)) for k in range(1, N + 1)]
        first = N > 0 and all(any(hit[k - 1] for k in range(n, N + 1)) for n in range(1, N + 1))
        labels[x] = names[0] if first else names[1]
    return PartitionReport(labels, N)


def _system_samples(system: LevelSystem, count: int, rng: random.Random) -> list[Fraction]:
    K = system.depth
    size = system.size(K)
    idx = {0, size - 1} | {rng.randrange(size) for _ in range(count)}
    return [system.point(K, i) for i in sorted(idx)]


def assemble_partition(model: OpenSetModel, coverA: NullCover, depth: int, seed: int = 0,
                       random_count: int = 1000, samples: int = 8,
                       self_apply: bool = False) -> PartitionReport:
    """Schedule against A' = A u B, split, classify samples, certify brackets.

    With ``self_apply`` the A-samples are points of B itself.
    """
    sched = schedule_scales(model, coverA, depth, self_cover=True)
    s1, s2 = sched.systems
    null = verify_null(sched)
    rounds = lemma_rounds(sched)
    split = split_cover(rounds, *sched.gauges)
    rng = random.Random(seed)
    b_points = _system_samples(s1, samples, rng) + _system_samples(s2, samples, rng)
    if self_apply:
        a_points = list(b_points)
    else:
        a_points = [(I.left + I.right) / 2 for p in coverA.pieces()
                    if isinstance(p, IntervalFamily) for I in p]
    a_report = classify_points(a_points, split, names=("A1", "A2"))
    b_report = classify_points(b_points, split)
    labels = {("A", x): v for x, v in a_report.labels.items()}
    K = depth
    for x in b_points:
        in1, in2 = s1.covers(x, K), s2.covers(x, K)
        if in1 and not in2:
            labels[("B", x)] = "B1"
        elif in2 and not in1:
            labels[("B", x)] = "B2"
        else:
            labels[("B", x)] = b_report.labels[x]
    factors, brackets, scaled = [], [], []
    for s, g in zip(sched.systems, sched.gauges):
        upper = min(canonical_upper_bound(s, g, k) for k in range(1, s.depth + 1))
        f = 1 / upper
        h = scale(g, f)
        factors.append(f)
        scaled.append(h)
        brackets.append(mass_distribution_check(s, h, 8, random_count=random_count, seed=seed))
    certs = {"partition": check_partition(rounds, split),
             "lemma_sums": Certificate("lemma_sums", all(
                 t < Fraction(1, 2**k) for k, t in enumerate(split.sums, start=1)),
                 {"sums": split.sums}),
             "schedule": Certificate("schedule", sched.passed),
             "upper_one": Certificate("upper_one", all(
                 canonical_upper_bound(s, h, k) == 1
                 for s, h in zip(sched.systems, scaled) for k in range(1, s.depth + 1)))}
    return PartitionReport(labels, a_report.horizon, null.sums, tuple(factors), tuple(brackets),
                           certs, null, sched)


__all__ = [
    "BoundCertificate", "CoverSplit", "CoverTail", "InterleavedSchedule", "LevelCover",
    "NullCertificate", "NullCover", "PartitionReport", "ScheduleError", "assemble_partition",
    "band_edges", "check_partition", "classify_points", "lemma_rounds", "random_null_cover",
    "reverify", "rho", "schedule_inequalities", "schedule_scales", "split_cover", "verify_null",
]
