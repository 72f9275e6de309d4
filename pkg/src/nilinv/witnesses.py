"""Witness pairs showing that no element can be dropped from a separating set.

A record holds two tuples that agree on every word of a reference set except
its target, and disagree on the target.  Records are either transcribed
integer data or obtained from those by relabeling indices (and embedding a
d=2 pair into d=3 with a zero third matrix).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .errors import InputError
from .exact import J2, E, Matrix, NilTuple
from .io import tuple_to_document
from .words import (
    InvariantSet,
    TraceWord,
    WordEvaluator,
    builtin_set,
    permute_indices,
    word,
)


@dataclass(frozen=True)
class WitnessRecord:
    id: str
    set_name: str
    target: TraceWord
    tuple_a: NilTuple
    tuple_b: NilTuple
    source: str
    # words checked for agreement: ``against`` minus the target (defaults to set_name)
    against: str | None = None

    @property
    def d(self) -> int:
        return self.tuple_a.d

    def reference_set(self) -> InvariantSet:
        return builtin_set(self.against or self.set_name, self.d)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "set": self.set_name,
            "against": self.against or self.set_name,
            "target": str(self.target),
            "source": self.source,
            "a": tuple_to_document(self.tuple_a),
            "b": tuple_to_document(self.tuple_b),
        }


@dataclass(frozen=True)
class WitnessReport:
    id: str
    target: TraceWord
    agree_ok: bool
    separate_ok: bool
    failing_word: TraceWord | None
    values: tuple

    @property
    def ok(self) -> bool:
        return self.agree_ok and self.separate_ok


@dataclass(frozen=True)
class MinimalityReport:
    set_name: str
    d: int
    against: str
    total: int
    witnessed: tuple
    missing: tuple
    reports: tuple = field(repr=False)

    @property
    def passed(self) -> bool:
        return not self.missing

    def summary(self) -> str:
        return f"{len(self.witnessed)}/{self.total} {self.set_name}"


# -- transcribed data ----------------------------------------------------------------

def _t(*mats) -> NilTuple:
    return NilTuple(tuple(mats))


def _m(rows) -> Matrix:
    return Matrix(rows)


Z3 = Matrix.zero(3)
C2 = E(1, 1, 2) + E(1, 2, 2) - E(2, 1, 2) - E(2, 2, 2)


def _two_by_two_records() -> list[WitnessRecord]:
    e12, e21 = E(1, 2, 2), E(2, 1, 2)
    z = Matrix.zero(2)
    pair = (_t(e12, e12), _t(e12, e21))
    out = [WitnessRecord("s2d2-12", "S2", word("12"), *pair, "transcribed")]
    out.append(WitnessRecord(
        "s2d3-123", "S2", word("123"), _t(e12, -e21, C2), _t(e12, C2, -e21), "transcribed"
    ))
    # the d=2 pair placed on letters (i, j) with the remaining slot zero
    for i, j in ((1, 2), (1, 3), (2, 3)):
        a, b = [z] * 3, [z] * 3
        a[i - 1], a[j - 1] = pair[0].mats
        b[i - 1], b[j - 1] = pair[1].mats
        out.append(WitnessRecord(
            f"s2d3-{i}{j}", "S2", word(f"{i}{j}"), _t(*a), _t(*b), "embedded from s2d2-12"
        ))
    return out


S32_PAIRS = {
    "12": (E(3, 2), E(1, 2)),
    "112": (_m([[0, 1, 0], [1, 0, -1], [0, 1, 0]]), _m([[0, 0, 0], [1, 0, 0], [-1, 1, 0]])),
    "1122": (_m([[0, -2, 1], [2, 0, 1], [2, 2, 0]]), _m([[0, 0, 2], [0, 0, -1], [2, 4, 0]])),
    "112212": (_m([[0, 1, 0], [0, 0, 0], [1, 1, 0]]), _m([[0, 0, -1], [0, 0, 1], [1, 1, 0]])),
}

TRIPLES = {
    "123": (_t(E(3, 1), E(1, 2) + E(3, 2), E(2, 3)), _t(Z3, E(1, 2), E(2, 1))),
    "1123": (_t(E(2, 1) + E(3, 2), E(1, 2), E(2, 3)), _t(E(1, 3) + E(2, 1), E(1, 2), J2)),
    "11213": (_t(E(2, 1) + E(3, 2), E(1, 3), E(2, 3)), _t(E(2, 3) + E(3, 1), E(1, 2), E(1, 3))),
}


def _s32_records() -> list[WitnessRecord]:
    out = []
    for f, (a2, b2) in S32_PAIRS.items():
        out.append(WitnessRecord(f"s32-{f}", "S32", word(f), _t(J2, a2), _t(J2, b2), "transcribed"))
    base = out[1]
    out.insert(2, WitnessRecord(
        "s32-122", "S32", word("122"),
        permute_indices(base.tuple_a, (2, 1)),
        permute_indices(base.tuple_b, (2, 1)),
        "derived from s32-112 by swapping indices 1 and 2",
    ))
    return out


def _s33_bases() -> list[tuple[str, TraceWord, NilTuple, NilTuple]]:
    bases = [(f"s33-{f}", word(f), a, b) for f, (a, b) in TRIPLES.items()]
    for f, (a2, b2) in S32_PAIRS.items():
        bases.append((f"s32-{f}", word(f), _t(J2, a2, Z3), _t(J2, b2, Z3)))
    return bases


def _s33_records() -> list[WitnessRecord]:
    """One record per element of S33, checked against all of P33.

    For each target the first base (in the order of ``_s33_bases``) and the
    first permutation (lexicographic) mapping the base's target onto it up to
    rotation is used.  Nothing is searched beyond that relabeling.
    """
    bases = _s33_bases()
    out = []
    for f in builtin_set("S33"):
        c = f.canonical()
        rec = None
        for base_id, bf, a, b in bases:
            for p in permutations((1, 2, 3)):
                if permute_indices(bf, p).canonical() != c:
                    continue
                ident = p == (1, 2, 3)
                if ident and base_id.startswith("s33-"):
                    source = "transcribed"
                else:
                    perm = "".join(map(str, p))
                    source = f"derived from {base_id} by index map {perm}" + (
                        "" if base_id.startswith("s33-") else " with zero third matrix"
                    )
                rec = WitnessRecord(
                    f"s33-{f}", "S33", f, permute_indices(a, p), permute_indices(b, p), source, "P33"
                )
                break
            if rec:
                break
        if rec is None:
            raise AssertionError(f"no base record relabels onto {f}")
        out.append(rec)
    return out


@lru_cache(maxsize=1)
def _catalog() -> tuple:
    return tuple(_two_by_two_records() + _s32_records() + _s33_records())


def catalog() -> list[WitnessRecord]:
    return list(_catalog())


def catalog_json() -> str:
    return json.dumps([r.to_dict() for r in _catalog()], indent=1)


# -- verification ---------------------------------------------------------------------

def verify_witness(r: WitnessRecord) -> WitnessReport:
    """Replay a record: all other reference words agree, the target differs."""
    a, b = r.tuple_a, r.tuple_b
    if a.d != b.d or a.size != b.size:
        raise InputError(f"record {r.id}: tuples have different shapes")
    ref = r.reference_set()
    if a.size != ref.size:
        raise InputError(f"record {r.id}: {a.size}x{a.size} tuples do not fit {ref.name}")
    if r.target not in builtin_set(r.set_name, a.d):
        raise InputError(f"record {r.id}: target {r.target} is not in {r.set_name}")
    ea, eb = WordEvaluator(a), WordEvaluator(b)
    k = ref.index(r.target)
    failing = None
    for h in ref.words[:k] + ref.words[k + 1:]:
        if ea(h) != eb(h):
            failing = h
            break
    va, vb = ea(r.target), eb(r.target)
    return WitnessReport(r.id, r.target, failing is None, va != vb, failing, (va, vb))


_MIN_DEFAULTS = {"S32": 2, "S33": 3}


def verify_minimality(set_name: str, d: int | None = None, records=None) -> MinimalityReport:
    """Check that every element of a set has a passing witness record.

    ``S2`` takes d in 1..3; ``S33`` targets are checked against P33 minus the
    target, the stronger statement.
    """
    if set_name == "S2":
        if d is None or not 1 <= d <= 3:
            raise InputError("S2 minimality is catalogued for d in 1..3")
    elif set_name in _MIN_DEFAULTS:
        d = _MIN_DEFAULTS[set_name] if d is None else d
    else:
        raise InputError(f"no witness catalog for {set_name!r}")
    s = builtin_set(set_name, d)
    pool = [r for r in (catalog() if records is None else records) if r.set_name == set_name and r.d == d]
    reports, witnessed, missing = [], [], []
    against = set_name
    for f in s:
        mine = [r for r in pool if r.target.canonical() == f.canonical()]
        reps = [verify_witness(r) for r in mine]
        reports += reps
        if mine:
            against = mine[0].against or set_name
        (witnessed if any(x.ok for x in reps) else missing).append(f)
    return MinimalityReport(set_name, d, against, len(s), tuple(witnessed), tuple(missing), tuple(reports))
