"""Digit-expansion sets over a mixed-radix base.

A point is sum_i k_i / (N_1 ... N_i) with N_i = n_i (or the Davies
denominators N_i >= n_i**i). The constraint side always reads the digit
ratios k_i / n_i. All sets are depth-D truncations; a digit vector of
length d < D has trailing zeros.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .exactcore import Certificate, InputError

HALF = Fraction(1, 2)


class DigitError(ValueError):
    def __init__(self, message: str, index: int | None = None):
        self.index = index
        super().__init__(message if index is None else f"digit {index}: {message}")


@dataclass(frozen=True)
class BaseSystem:
    bases: tuple[int, ...]
    davies: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(int(n) for n in self.bases))
        if self.davies is not None:
            object.__setattr__(self, "davies", tuple(int(N) for N in self.davies))
        for i, n in enumerate(self.bases):
            if n < 2:
                raise InputError(f"base {n} < 2", f"bases[{i}]")
            if i and n < self.bases[i - 1]:
                raise InputError("bases must be nondecreasing", f"bases[{i}]")
        if self.davies is not None:
            if len(self.davies) != len(self.bases):
                raise InputError("davies denominators must match bases in length", "davies")
            for i, (n, N) in enumerate(zip(self.bases, self.davies), start=1):
                if N < n ** i:
                    raise InputError(f"N_{i} = {N} < n_{i}^{i} = {n ** i}", f"davies[{i - 1}]")

    @classmethod
    def davies_variant(cls, depth: int) -> BaseSystem:
        """n_i = i + 1 and N_i = (i + 1)**i."""
        return cls(tuple(i + 1 for i in range(1, depth + 1)),
                   tuple((i + 1) ** i for i in range(1, depth + 1)))

    @property
    def depth(self) -> int:
        return len(self.bases)

    def radix(self, i: int) -> int:
        """Positional denominator factor at 1-based position i."""
        return (self.davies or self.bases)[i - 1]

    def scale(self, i: int) -> int:
        """N_1 * ... * N_i (1 for i = 0)."""
        out = 1
        for t in range(1, i + 1):
            out *= self.radix(t)
        return out

    def n(self, i: int) -> int:
        return self.bases[i - 1]


@dataclass(frozen=True)
class DigitVector:
    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(k) for k in self.digits))

    @classmethod
    def of(cls, *digits: int) -> DigitVector:
        return cls(tuple(digits))

    def __len__(self) -> int:
        return len(self.digits)

    def at(self, i: int) -> int:
        """Digit at 1-based position i (0 past the end)."""
        return self.digits[i - 1] if 1 <= i <= len(self.digits) else 0

    def __add__(self, other: DigitVector) -> DigitVector:
        d = max(len(self), len(other))
        return DigitVector(tuple(self.at(i) + other.at(i) for i in range(1, d + 1)))


@dataclass(frozen=True)
class HalfSum:
    bound: Fraction = HALF


@dataclass(frozen=True)
class LpBall:
    p: Fraction
    radius: Fraction
    C: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "radius", Fraction(self.radius))
        object.__setattr__(self, "C", Fraction(self.C))
        if self.p < 1:
            raise InputError("p must be at least 1", "p")
        if self.radius <= 0 or self.C <= 0:
            raise InputError("radius and C must be positive")

    def digit_bounds(self, base: BaseSystem) -> tuple[int, ...]:
        """|k_i| <= m_i. With r < 1/(3C) this is ceil(n_i/3) - 1."""
        if self.radius < 1 / (3 * self.C):
            return tuple(-(-n // 3) - 1 for n in base.bases)
        return tuple(math.floor(self.C * self.radius * n) for n in base.bases)


@dataclass(frozen=True)
class DigitSetSpec:
    base: BaseSystem
    constraint: HalfSum | LpBall | None = field(default_factory=HalfSum)


def check_digits(base: BaseSystem, v: DigitVector, bounds: Sequence[int] | None = None) -> None:
    """Mode A (0 <= k_i < n_i) unless symmetric ``bounds`` m_i are given."""
    if len(v) > base.depth:
        raise DigitError(f"vector longer than base depth {base.depth}", len(v))
    for i, k in enumerate(v.digits, start=1):
        if bounds is None:
            if not 0 <= k < base.n(i):
                raise DigitError(f"{k} outside 0..{base.n(i) - 1}", i)
        elif abs(k) > bounds[i - 1]:
            raise DigitError(f"|{k}| exceeds {bounds[i - 1]}", i)


def value_of(base: BaseSystem, v: DigitVector, bounds: Sequence[int] | None = None) -> Fraction:
    check_digits(base, v, bounds)
    return shift(base, v, 1)


def shift(base: BaseSystem, v: DigitVector, r: int) -> Fraction:
    """h_r: the value of the expansion with positions below r dropped."""
    if r < 1:
        raise ValueError("shift index must be >= 1")
    total = Fraction(0)
    scale = base.scale(r - 1)
    for i in range(r, len(v) + 1):
        scale *= base.radix(i)
        if v.at(i):
            total += Fraction(v.at(i), scale)
    return total


def ratio_tail(base: BaseSystem, v: DigitVector, r: int) -> Fraction:
    """sum_{i >= r} k_i / n_i."""
    return sum((Fraction(v.at(i), base.n(i)) for i in range(max(r, 1), len(v) + 1)), Fraction(0))


def tail_index(spec: DigitSetSpec | BaseSystem, v: DigitVector, m: int) -> int:
    """Smallest r >= 1 with sum_{i >= r} k_i/n_i <= 4**-m."""
    base = spec.base if isinstance(spec, DigitSetSpec) else spec
    bound = Fraction(1, 4 ** m)
    tail = Fraction(0)
    r = len(v) + 1
    # walk backwards; tails only grow as r decreases (digits are >= 0)
    for i in range(len(v), 0, -1):
        tail += Fraction(v.at(i), base.n(i))
        if tail > bound:
            break
        r = i
    return r


def _root_bracket(a: Fraction, p: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= a**p <= hi with hi - lo <= 2**-bits * (1 + a**p)."""
    if a == 0:
        return Fraction(0), Fraction(0)
    s, t = p.numerator, p.denominator
    u, w = a.numerator ** s, a.denominator ** s
    Q = 1 << bits
    # floor((u/w * Q**t) ** (1/t))
    target = (u * Q ** t) // w
    lo = _iroot(target, t)
    return Fraction(lo, Q), Fraction(lo + 1, Q)


def _iroot(x: int, t: int) -> int:
    if x < 2:
        return x
    y = 1 << ((x.bit_length() + t - 1) // t)
    while True:
        z = ((t - 1) * y + x // y ** (t - 1)) // t
        if z >= y:
            break
        y = z
    while y ** t > x:
        y -= 1
    while (y + 1) ** t <= x:
        y += 1
    return y


def lp_power_sum_le(terms: Sequence[Fraction], p: Fraction, radius: Fraction,
                    max_bits: int = 4096) -> tuple[bool, dict]:
    """Decide sum |a_i|**p <= radius**p exactly (integer p) or by bracketing."""
    terms = [abs(a) for a in terms if a]
    if not terms:
        return True, {"sum": Fraction(0)}
    if p.denominator == 1:
        e = p.numerator
        total = sum((a ** e for a in terms), Fraction(0))
        return total <= radius ** e, {"sum": total, "bound": radius ** e}
    if len(terms) == 1:
        return terms[0] <= radius, {"term": terms[0], "radius": radius}
    bits = 64
    while bits <= max_bits:
        brs = [_root_bracket(a, p, bits) for a in terms]
        lo = sum((b[0] for b in brs), Fraction(0))
        hi = sum((b[1] for b in brs), Fraction(0))
        rlo, rhi = _root_bracket(radius, p, bits)
        if hi <= rlo:
            return True, {"sum_upper": hi, "bound_lower": rlo, "bits": bits}
        if lo > rhi:
            return False, {"sum_lower": lo, "bound_upper": rhi, "bits": bits}
        bits *= 2
    raise ArithmeticError("lp comparison undecided at the precision cap")


def membership(spec: DigitSetSpec, v: DigitVector) -> tuple[bool, Certificate]:
    c = spec.constraint
    if isinstance(c, LpBall):
        bounds = c.digit_bounds(spec.base)
        check_digits(spec.base, v, bounds)
        terms = [Fraction(v.at(i), spec.base.n(i)) for i in range(1, len(v) + 1)]
        ok, vals = lp_power_sum_le(terms, c.p, c.radius)
        return ok, Certificate("lp_ball", ok, vals)
    check_digits(spec.base, v)
    if c is None:
        return True, Certificate("unconstrained", True)
    s = ratio_tail(spec.base, v, 1)
    ok = s <= c.bound
    return ok, Certificate("half_sum", ok, {"sum": s, "bound": c.bound})


def enumerate_set(spec: DigitSetSpec, depth: int | None = None) -> Iterator[DigitVector]:
    """All admissible vectors of the given length (mode A), pruned by the constraint."""
    base = spec.base
    depth = base.depth if depth is None else depth
    c = spec.constraint
    bound = c.bound if isinstance(c, HalfSum) else None
    if isinstance(c, LpBall):
        raise ValueError("enumerate_set handles half_sum and unconstrained sets")

    def rec(prefix: list[int], used: Fraction):
        i = len(prefix) + 1
        if i > depth:
            yield DigitVector(tuple(prefix))
            return
        n = base.n(i)
        for k in range(n):
            s = used + Fraction(k, n)
            if bound is not None and s > bound:
                break
            prefix.append(k)
            yield from rec(prefix, s)
            prefix.pop()

    yield from rec([], Fraction(0))


def count_prefixes(spec: DigitSetSpec, depth: int) -> int:
    """Number of admissible digit prefixes of the given length."""
    base = spec.base
    c = spec.constraint
    if c is None:
        return math.prod(base.bases[:depth])
    # dynamic programme over the (exact) running ratio sum
    states: dict[Fraction, int] = {Fraction(0): 1}
    for i in range(1, depth + 1):
        n = base.n(i)
        nxt: dict[Fraction, int] = {}
        for s, cnt in states.items():
            for k in range(n):
                t = s + Fraction(k, n)
                if t > c.bound:
                    break
                nxt[t] = nxt.get(t, 0) + cnt
        states = nxt
    return sum(states.values())


def uniformize(spec: DigitSetSpec, K_spec: Iterable[DigitVector], j: int,
               r_jj: int) -> tuple[list[DigitVector], Certificate]:
    """Apply h_{r_jj}: zero every digit before position r_jj.

    Positions are kept, so the output value is shift(v, r_jj). Requires
    tail_index(v, j) <= r_jj for every input.
    """
    out = []
    worst = Fraction(0)
    bound = Fraction(1, 4 ** j)
    for v in K_spec:
        t = tail_index(spec, v, j)
        if t > r_jj:
            raise DigitError(f"tail index t_{j} = {t} exceeds r_jj = {r_jj} for {v.digits}")
        w = DigitVector(tuple(0 if i < r_jj else v.at(i) for i in range(1, len(v) + 1)))
        s = ratio_tail(spec.base, w, 1)
        worst = max(worst, s)
        out.append(w)
    ok = worst <= bound
    return out, Certificate("uniformize", ok, {"j": j, "r_jj": r_jj, "max_ratio_sum": worst,
                                              "bound": bound})


def r_table_for(spec: DigitSetSpec, component: Sequence[DigitVector], M: int) -> list[int]:
    """r_m = max over the component of t_m(x), m = 1..M (nondecreasing in m)."""
    return [max((tail_index(spec, v, m) for v in component), default=1) for m in range(1, M + 1)]


def digitwise_sumset(*components: Sequence[DigitVector]) -> list[DigitVector]:
    """K_1 + K_2 + ... computed digit by digit (carry-free by construction)."""
    acc = [DigitVector(())]
    for comp in components:
        acc = [a + b for a in acc for b in comp]
    seen = {}
    for v in acc:
        seen.setdefault(v.digits, v)
    return list(seen.values())


@dataclass(frozen=True)
class PerfectSetSpec:
    base: BaseSystem
    positions: tuple[int, ...]
    amplitudes: tuple[int, ...]
    r_table: tuple[tuple[int, ...], ...]
    certificates: tuple[Certificate, ...] = ()

    @property
    def levels(self) -> int:
        return len(self.positions)

    def amplitude_ratio(self, l: int) -> Fraction:
        return Fraction(self.amplitudes[l - 1], self.base.n(self.positions[l - 1]))

    def element(self, selection: Sequence[int]) -> DigitVector:
        """The P-point with b(l) = a(l) where selection[l-1] is 1, else 0."""
        if len(selection) != self.levels:
            raise ValueError("selection length must equal the number of levels")
        d = [0] * max(self.positions, default=0)
        for l, bit in enumerate(selection, start=1):
            if bit not in (0, 1):
                raise ValueError("selections are 0/1 vectors")
            if bit:
                d[self.positions[l - 1] - 1] = self.amplitudes[l - 1]
        return DigitVector(tuple(d))

    def selections(self) -> list[tuple[int, ...]]:
        return list(itertools.product((0, 1), repeat=self.levels))


def build_perfect(spec: DigitSetSpec, r_table: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
                  L: int) -> PerfectSetSpec:
    """Minimal positions m(l) and amplitudes a(l) = ceil(n_{m(l)} 4^-l / 5).

    ``r_table[j]`` lists r^j_1, r^j_2, ... for component j (1-based when a
    mapping, in order when a sequence).
    """
    if isinstance(r_table, Mapping):
        rows = [tuple(r_table[j]) for j in sorted(r_table)]
    else:
        rows = [tuple(row) for row in r_table]
    base = spec.base
    positions: list[int] = []
    amps: list[int] = []
    certs = []
    for l in range(1, L + 1):
        need = []
        for row in rows[: l + 2]:
            if len(row) < 4 * l:
                raise ValueError(f"r table row too short: need r_{4 * l}")
            need.append(row[4 * l - 1])
        pos = max(need + [positions[-1] + 1 if positions else 1])
        if pos > base.depth:
            raise DigitError(f"position m({l}) = {pos} beyond base depth {base.depth}")
        n = base.n(pos)
        lo = Fraction(n, 5 * 4 ** l)
        hi = Fraction(n, 4 * 4 ** l)
        a = math.ceil(lo)
        if a > hi or a < 1:
            raise DigitError(f"no valid amplitude at level {l}: window [{lo}, {hi}] for n = {n}")
        positions.append(pos)
        amps.append(a)
        ratio = Fraction(a, n)
        certs.append(Certificate("amplitude_window", True,
                                 {"level": l, "position": pos, "a": a, "ratio": ratio,
                                  "lower": Fraction(1, 5 * 4 ** l), "upper": Fraction(1, 4 * 4 ** l)}))
        certs.append(Certificate("position", pos >= max(need),
                                 {"level": l, "position": pos, "required": max(need)}))
    total = sum((Fraction(a, base.n(p)) for a, p in zip(amps, positions)), Fraction(0))
    certs.append(Certificate("amplitude_total", total <= Fraction(1, 12),
                             {"total": total, "bound": Fraction(1, 12)}))
    return PerfectSetSpec(base, tuple(positions), tuple(amps), tuple(rows), tuple(certs))


def check_translate_disjoint(P: PerfectSetSpec, K: Sequence[DigitVector],
                             p_sel: Sequence[int], q_sel: Sequence[int]) -> Certificate:
    """Separate p + K from q + K by the ratio tail from position m(l_0)."""
    p_sel, q_sel = tuple(p_sel), tuple(q_sel)
    if p_sel == q_sel:
        raise ValueError("identical selections, translates coincide")
    l0 = next(l for l in range(1, P.levels + 1) if p_sel[l - 1] != q_sel[l - 1])
    if p_sel[l0 - 1]:
        p_sel, q_sel = q_sel, p_sel
    base = P.base
    pos = P.positions[l0 - 1]
    threshold = Fraction(1, 5 * 4 ** l0)
    twelfth = Fraction(1, 12 * 4 ** l0)
    p, q = P.element(p_sel), P.element(q_sel)
    k_tail = max((ratio_tail(base, x, pos) for x in K), default=Fraction(0))
    amp_tail = sum((P.amplitude_ratio(l) for l in range(l0 + 1, P.levels + 1)), Fraction(0))
    p_max = max(ratio_tail(base, p + x, pos) for x in K)
    q_min = min(ratio_tail(base, q + x, pos) for x in K)
    p_vals = {value_of(base, p + x) for x in K}
    q_vals = {value_of(base, q + x) for x in K}
    values = {
        "l0": l0, "position": pos, "threshold": threshold,
        "k_tail_max": k_tail, "k_tail_bound": twelfth,
        "amplitude_tail": amp_tail, "amplitude_tail_bound": twelfth,
        "p_tail_max": p_max, "q_tail_min": q_min, "margin": q_min - p_max,
        "margin_floor": threshold - 2 * twelfth,
    }
    ok = (k_tail <= twelfth and amp_tail <= twelfth and p_max < threshold <= q_min
          and q_min - p_max >= threshold - 2 * twelfth and not (p_vals & q_vals))
    witness = None if ok else (sorted(p_vals & q_vals)[:1] or values)
    return Certificate("translate_disjoint", ok, values, witness=witness)


def in_half_sum_set(base: BaseSystem, v: DigitVector) -> bool:
    try:
        check_digits(base, v)
    except DigitError:
        return False
    return ratio_tail(base, v, 1) <= HALF


def uniqueness_check(base: BaseSystem, m: Sequence[int], D: int,
                     cap: int = 10**6) -> Certificate:
    """Injectivity of symmetric-digit expansions, and the full-grid case."""
    if len(m) < D or base.depth < D:
        raise ValueError("bounds and bases must cover depth D")
    total = math.prod(2 * m[i] + 1 for i in range(D))
    if total > cap:
        raise ValueError(f"exhaustion limit exceeded: {total} vectors > cap {cap}")
    ranges = [range(-m[i], m[i] + 1) for i in range(D)]
    vals = [value_of(base, DigitVector(ds), m) for ds in itertools.product(*ranges)]
    injective = len(set(vals)) == len(vals)
    values = {"vectors": total, "distinct": len(set(vals)), "injective": injective}
    strict = all(2 * m[i] + 1 < base.n(i + 1) for i in range(D))
    balanced = all(2 * m[i] + 1 == base.n(i + 1) for i in range(D))
    if balanced:
        N = base.scale(D)
        grid = {Fraction(j, N) for j in range(-(N // 2), N // 2 + 1)}
        full = set(vals) == grid
        values["full_grid"] = full
        return Certificate("uniqueness", injective and full, {"mode": "balanced", **values})
    mode = "strict" if strict else "mixed"
    return Certificate("uniqueness", injective, {"mode": mode, **values})


def rigidity_check(S: Iterable[Fraction]) -> tuple[bool, tuple | None]:
    """Is x - y = u - v solvable only trivially in S (a Sidon set)?"""
    pts = sorted(S)
    if len(set(pts)) != len(pts):
        raise ValueError("rigidity_check needs distinct elements")
    seen: dict = {}
    for j, x in enumerate(pts):
        for y in pts[:j]:
            d = x - y
            if d in seen:
                u, v = seen[d]
                return False, (x, y, u, v)
            seen[d] = (x, y)
    return True, None


def greedy_sidon(count: int) -> list[int]:
    """Greedy Sidon sequence from 1 (Mian-Chowla)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    seq = [1]
    diffs: set[int] = set()
    c = 1
    while len(seq) < count:
        c += 1
        new = [c - a for a in seq]
        if len(set(new)) == len(new) and not diffs.intersection(new):
            seq.append(c)
            diffs.update(new)
    return seq


def demo_components(spec: DigitSetSpec, sizes: Sequence[int] = (4, 4), depth: int | None = None,
                    seed: int = 0) -> list[list[DigitVector]]:
    """Deterministic 0/1 digit vectors in the half-sum set, one list per component.

    The first vector of every component is all ones up to ``depth``.
    """
    import random

    rng = random.Random(seed)
    depth = spec.base.depth if depth is None else depth
    comps = []
    for size in sizes:
        comp = [DigitVector((1,) * depth)]
        while len(comp) < size:
            v = DigitVector(tuple(rng.randint(0, 1) for _ in range(depth)))
            if in_half_sum_set(spec.base, v) and v not in comp:
                comp.append(v)
        comps.append(comp)
    return comps


@dataclass
class TranslatePipeline:
    spec: DigitSetSpec
    components: list[list[DigitVector]]
    uniformized: list[list[DigitVector]]
    r_table: list[list[int]]
    K: list[DigitVector]
    P: PerfectSetSpec
    certificates: list[Certificate]
    pairs: list[tuple[tuple[int, ...], tuple[int, ...], Certificate]]

    @property
    def passed(self) -> bool:
        return all(self.certificates) and all(c for _, _, c in self.pairs)


def translate_pipeline(spec: DigitSetSpec, components: Sequence[Sequence[DigitVector]],
                       L: int) -> TranslatePipeline:
    """Uniformize each component, form K, build P, certify every translate pair."""
    certs = []
    rows = []
    unif = []
    for j, comp in enumerate(components, start=1):
        row = r_table_for(spec, comp, 4 * L)
        rows.append(row)
        out, cert = uniformize(spec, comp, j, row[j - 1])
        unif.append(out)
        certs.append(cert)
    K = digitwise_sumset(*unif)
    k_ok = all(in_half_sum_set(spec.base, x) for x in K)
    kmax = max((ratio_tail(spec.base, x, 1) for x in K), default=Fraction(0))
    certs.append(Certificate("sum_in_set", k_ok and kmax <= Fraction(1, 3),
                             {"max_ratio_sum": kmax, "bound": Fraction(1, 3)}))
    P = build_perfect(spec, rows, L)
    certs.extend(P.certificates)
    sels = P.selections()
    plus_ok = all(in_half_sum_set(spec.base, P.element(s) + x) for s in sels for x in K)
    certs.append(Certificate("translates_in_set", plus_ok, {"translates": len(sels)}))
    pairs = []
    for a, b in itertools.combinations(sels, 2):
        pairs.append((a, b, check_translate_disjoint(P, K, a, b)))
    return TranslatePipeline(spec, [list(c) for c in components], unif, rows, K, P, certs, pairs)
