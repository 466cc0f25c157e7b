"""JSON codecs. Rationals travel as "p/q" strings, never as floats."""

from __future__ import annotations

import json
from dataclasses import is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .balanced_cantor import Level, LevelSystem
from .convolve import DiscreteMeasure
from .digit_groups import BaseSystem, DigitVector
from .exactcore import (Certificate, InputError, Interval, IntervalFamily, OpenSetModel, fmt,
                        to_rational)
from .gauge import Gauge


def to_json(value: Any) -> Any:
    """Plain JSON data for reports: Fractions become "p/q" strings."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        raise TypeError("floats only appear in fields named *_float")
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, Interval):
        return interval_json(value)
    if isinstance(value, Certificate):
        return {"name": value.name, "pass": value.passed, "values": to_json(value.values),
                "witness": to_json(value.witness), "depth": value.depth}
    if isinstance(value, DigitVector):
        return {"digits": list(value.digits)}
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            key = str(k)
            out[key] = v if key.endswith("_float") else to_json(v)
        return out
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_json(v) for v in items]
    if is_dataclass(value):
        return repr(value)
    return str(value)


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_json(path: str | Path, data: Any) -> None:
    Path(path).write_text(dumps(data))


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} at line {exc.lineno}", str(path)) from None


def _get(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise InputError("expected an object", where)
    if key not in obj:
        raise InputError(f"missing field {key!r}", where)
    return obj[key]


def _list(obj: Any, where: str) -> list:
    if not isinstance(obj, list):
        raise InputError("expected a list", where)
    return obj


def _int(obj: Any, where: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise InputError("expected an integer", where)
    return obj


def interval_json(I: Interval) -> dict:
    return {"left": fmt(I.left), "right": fmt(I.right)}


def interval_from(obj: Any, where: str = "interval") -> Interval:
    left = to_rational(_get(obj, "left", where), f"{where}.left")
    right = to_rational(_get(obj, "right", where), f"{where}.right")
    if left > right:
        raise InputError(f"left {left} > right {right}", where)
    return Interval(left, right)


def family_from(obj: Any, where: str) -> IntervalFamily:
    return IntervalFamily(tuple(interval_from(x, f"{where}[{i}]")
                                for i, x in enumerate(_list(obj, where))))


def gauge_json(g: Gauge) -> dict:
    return {"breakpoints": [[fmt(x), fmt(y)] for x, y in g.breakpoints]}


def gauge_from(obj: Any, where: str = "gauge") -> Gauge:
    pts = []
    for i, pair in enumerate(_list(_get(obj, "breakpoints", where), f"{where}.breakpoints")):
        w = f"{where}.breakpoints[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError("expected [x, y]", w)
        pts.append((to_rational(pair[0], f"{w}[0]"), to_rational(pair[1], f"{w}[1]")))
    return Gauge(tuple(pts))


def model_json(model: OpenSetModel) -> dict:
    return {"levels": [[interval_json(I) for I in fam] for fam in model.levels]}


def model_from(obj: Any, where: str = "model") -> OpenSetModel:
    levels = _list(_get(obj, "levels", where), f"{where}.levels")
    return OpenSetModel(tuple(family_from(fam, f"{where}.levels[{n}]")
                              for n, fam in enumerate(levels)))


def level_json(lv: Level) -> dict:
    out = {"m": lv.m, "r": fmt(lv.r), "n": lv.n}
    if lv.lattice:
        out["offset"] = fmt(lv.offset)
    else:
        out["F"] = [fmt(x) for x in lv.F]
    if lv.aligned:
        out["aligned"] = True
    return out


def system_json(system: LevelSystem) -> dict:
    return {"levels": [level_json(lv) for lv in system.levels]}


def system_from(obj: Any, where: str = "system") -> LevelSystem:
    levels = []
    for k, lv in enumerate(_list(_get(obj, "levels", where), f"{where}.levels")):
        w = f"{where}.levels[{k}]"
        m = _int(_get(lv, "m", w), f"{w}.m")
        r = to_rational(_get(lv, "r", w), f"{w}.r")
        n = _int(_get(lv, "n", w), f"{w}.n")
        if m < 1 or n < 1 or r <= 0:
            raise InputError("m, n and r must be positive", w)
        aligned = bool(lv.get("aligned", False))
        if "F" in lv:
            F = tuple(to_rational(x, f"{w}.F[{i}]") for i, x in enumerate(_list(lv["F"], f"{w}.F")))
            if any(b <= a for a, b in zip(F, F[1:])):
                raise InputError("F must be strictly increasing", f"{w}.F")
            levels.append(Level(m=m, r=r, F=F, n=n, aligned=aligned))
        else:
            offset = to_rational(_get(lv, "offset", w), f"{w}.offset")
            levels.append(Level(m=m, r=r, F=None, n=n, offset=offset, aligned=aligned))
    return LevelSystem(tuple(levels))


def vector_from(obj: Any, where: str = "vector") -> DigitVector:
    digits = _list(_get(obj, "digits", where), f"{where}.digits")
    return DigitVector(tuple(_int(d, f"{where}.digits[{i}]") for i, d in enumerate(digits)))


def bases_from(obj: Any, where: str = "bases") -> BaseSystem:
    bases = _list(_get(obj, "bases", where), f"{where}.bases")
    davies = obj.get("davies")
    return BaseSystem(tuple(_int(b, f"{where}.bases[{i}]") for i, b in enumerate(bases)),
                      None if davies is None else tuple(
                          _int(b, f"{where}.davies[{i}]") for i, b in enumerate(davies)))


def measure_json(mu: DiscreteMeasure) -> dict:
    return {"support": [[fmt(x), fmt(w)] for x, w in mu.support]}


def measure_from(obj: Any, where: str = "measure") -> DiscreteMeasure:
    pairs = []
    for i, pair in enumerate(_list(_get(obj, "support", where), f"{where}.support")):
        w = f"{where}.support[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError("expected [point, weight]", w)
        pairs.append((to_rational(pair[0], f"{w}[0]"), to_rational(pair[1], f"{w}[1]")))
    return DiscreteMeasure(tuple(pairs))


# covers and schedules import lazily to keep module dependencies one-way

def cover_json(cover) -> dict:
    from .incomparable import LevelCover

    rounds = []
    for rnd in cover.rounds:
        items = []
        for piece in rnd:
            if isinstance(piece, LevelCover):
                items.append({"level_cover": piece.label, "k": piece.k})
            else:
                items.extend(interval_json(I) for I in piece)
        rounds.append(items)
    return {"rounds": rounds}


def cover_from(obj: Any, where: str = "cover", systems: dict | None = None):
    from .incomparable import LevelCover, NullCover

    rounds = []
    for n, rnd in enumerate(_list(_get(obj, "rounds", where), f"{where}.rounds")):
        w = f"{where}.rounds[{n}]"
        pieces, plain = [], []
        for i, item in enumerate(_list(rnd, w)):
            if isinstance(item, dict) and "level_cover" in item:
                label = item["level_cover"]
                if not systems or label not in systems:
                    raise InputError(f"unknown level cover {label!r}", f"{w}[{i}]")
                pieces.append(LevelCover(systems[label], _int(item.get("k"), f"{w}[{i}].k"),
                                         label))
            else:
                plain.append(interval_from(item, f"{w}[{i}]"))
        if plain:
            pieces.insert(0, IntervalFamily(tuple(plain)))
        rounds.append(tuple(pieces))
    return NullCover(tuple(rounds))


def schedule_json(s) -> dict:
    return {
        "m1": s.m1, "m2": s.m2,
        "rho1": [fmt(x) for x in s.rho1], "rho2": [fmt(x) for x in s.rho2],
        "systems": [system_json(x) for x in s.systems],
        "gauges": [gauge_json(g) for g in s.gauges],
        "cover": cover_json(s.cover),
        "doublings": list(s.doublings),
    }


def schedule_from(obj: Any, where: str = "schedule"):
    from .incomparable import InterleavedSchedule

    systems = [system_from(x, f"{where}.systems[{i}]")
               for i, x in enumerate(_list(_get(obj, "systems", where), f"{where}.systems"))]
    gauges = [gauge_from(x, f"{where}.gauges[{i}]")
              for i, x in enumerate(_list(_get(obj, "gauges", where), f"{where}.gauges"))]
    if len(systems) != 2 or len(gauges) != 2:
        raise InputError("a schedule has exactly two systems and two gauges", where)
    rho1 = [to_rational(x, f"{where}.rho1[{i}]") for i, x in enumerate(_get(obj, "rho1", where))]
    rho2 = [to_rational(x, f"{where}.rho2[{i}]") for i, x in enumerate(_get(obj, "rho2", where))]
    cover = cover_from(_get(obj, "cover", where), f"{where}.cover",
                       {"F1": systems[0], "F2": systems[1]})
    m1 = [_int(x, f"{where}.m1") for x in _get(obj, "m1", where)]
    m2 = [_int(x, f"{where}.m2") for x in _get(obj, "m2", where)]
    doublings = [_int(x, f"{where}.doublings") for x in obj.get("doublings", [])]
    return InterleavedSchedule(m1, m2, rho1, rho2, tuple(systems), tuple(gauges), [], cover,
                               doublings)
