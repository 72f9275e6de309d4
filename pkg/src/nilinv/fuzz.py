"""Deterministic property fuzzing over structured families of tuple pairs.

Trial ``i`` of a run draws from its own stream keyed by (seed, family, i), so
any trial can be replayed alone and runs can be split and merged freely.
"""
from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .canon import STABILIZERS, V_KINDS, W_KINDS, ChangeOfBasis, matching_templates
from .errors import InputError
from .exact import J1, J2, Matrix, NilTuple
from .io import tuple_to_document
from .span import ENTRY_RANGE, _elementary_pair, random_nilpotent, random_tuple
from .words import WordEvaluator, builtin_set, permute_indices

FAMILY_TAGS = ("Conjugate", "StrictUpper", "Template", "Independent")
Z = Matrix.zero(3)


# -- random scalars and small blocks ---------------------------------------------------

def _q(rng: random.Random, r: int = ENTRY_RANGE) -> Fraction:
    return Fraction(rng.randint(-r, r), rng.randint(1, 3))


def _nz(rng: random.Random, r: int = ENTRY_RANGE) -> Fraction:
    while True:
        x = _q(rng, r)
        if x:
            return x


def _nil_block(p: Fraction, q: Fraction):
    """Nilpotent 2x2 [[p, q], [-p^2/q, -p]] (q != 0)."""
    return [[p, q], [-p * p / q, -p]]


def _nil_block_lower(p: Fraction, m: Fraction):
    """Nilpotent 2x2 [[p, -p^2/m], [m, -p]] (m != 0)."""
    return [[p, -p * p / m], [m, -p]]


def _strict_upper(rng: random.Random, r: int = ENTRY_RANGE) -> Matrix:
    return Matrix([[rng.randint(-r, r) if j > i else 0 for j in range(3)] for i in range(3)])


def _unimodular(rng: random.Random) -> ChangeOfBasis:
    g, g_inv = _elementary_pair(rng, 3, 8)
    return ChangeOfBasis(g, g_inv)


# -- templates ---------------------------------------------------------------------------
# Each builder returns a pair (A, B) that agrees on all of S33 for every choice
# of the free parameters.  Callers conjugate the sides independently afterwards.

def _t_j2j2_wii_wiii(rng, r):
    m, a23, b23 = _nz(rng, r), _q(rng, r), _q(rng, r)
    n = _nil_block(_q(rng, r), _nz(rng, r))
    a2 = Matrix([[0, 0, a23], [0, 0, 0], [0, m, 0]])
    b2 = Matrix([[0, 0, b23], [m, 0, 0], [0, 0, 0]])
    a3 = Matrix([[0, _q(rng, r), _q(rng, r)], [0, *n[0]], [0, *n[1]]])
    b3 = Matrix([[*n[0], _q(rng, r)], [*n[1], _q(rng, r)], [0, 0, 0]])
    return NilTuple.of(J2, a2, a3), NilTuple.of(J2, b2, b3)


def _t_j2j2_wi_lower(rng, r):
    m, a26 = _nz(rng, r), _q(rng, r)
    a2 = Matrix([[0, _q(rng, r), _q(rng, r)], [0, 0, a26], [0, 0, 0]])
    b2 = Matrix([[0, _q(rng, r), _q(rng, r)], [0, 0, a26], [0, 0, 0]])

    def side():
        n = _nil_block_lower(_q(rng, r), m)
        return Matrix([[0, _q(rng, r), _q(rng, r)], [0, *n[0]], [0, *n[1]]])

    return NilTuple.of(J2, a2, side()), NilTuple.of(J2, b2, side())


def _t_j2j2_wi_upper(rng, r):
    m, a22 = _nz(rng, r), _q(rng, r)

    def side():
        w = Matrix([[0, a22, _q(rng, r)], [0, 0, _q(rng, r)], [0, 0, 0]])
        n = _nil_block_lower(_q(rng, r), m)
        x = Matrix([[*n[0], _q(rng, r)], [*n[1], _q(rng, r)], [0, 0, 0]])
        return w, x

    a2, a3 = side()
    b2, b3 = side()
    return NilTuple.of(J2, a2, a3), NilTuple.of(J2, b2, b3)


def _zero_first(rng, a2: Matrix, a3: Matrix) -> NilTuple:
    g = _unimodular(rng)
    return NilTuple.of(Z, g.apply(a2), g.apply(a3))


def _t_j1zero_viii(rng, r):
    a31, a37 = _q(rng, r), _nz(rng, r)
    a2 = Matrix([[0, _q(rng, r), 0], [0, 0, 0], [1, 0, 0]])
    a3 = Matrix([[a31, _q(rng, r), -a31 * a31 / a37], [0, 0, 0], [a37, _q(rng, r), -a31]])
    return NilTuple.of(J1, a2, a3), _zero_first(rng, a2, a3)


def _t_j1zero_block(rng, r):
    n = _nil_block(_q(rng, r), _nz(rng, r))
    if rng.random() < 0.5:
        a26 = _q(rng, r)
        lower = [[0, 0, a26], [0, 0, 0]]
    else:
        a5 = _q(rng, r)
        lower = [[0, a5, -a5 * a5], [0, 1, -a5]]

    def pair_of(first_row2, first_row3):
        return Matrix([first_row2, *lower]), Matrix([first_row3, [0, *n[0]], [0, *n[1]]])

    top = (lambda: [0, _q(rng, r), _q(rng, r)])
    if lower[1][1] == 1:
        # the V_II shape has a zero (1,2) entry
        top2 = (lambda: [0, 0, _q(rng, r)])
    else:
        top2 = top
    a2, a3 = pair_of(top2(), top())
    b2, b3 = pair_of([0, _q(rng, r), _q(rng, r)], top())
    return NilTuple.of(J1, a2, a3), _zero_first(rng, b2, b3)


def _t_j1zero_a36(rng, r):
    a31, a37 = _q(rng, r), _nz(rng, r)
    a2 = Matrix([[0, 0, _q(rng, r)], [0, 0, 0], [0, 1, 0]])
    a3 = Matrix([[a31, _q(rng, r), -a31 * a31 / a37], [0, 0, 0], [a37, _q(rng, r), -a31]])
    return NilTuple.of(J1, a2, a3), _zero_first(rng, a2, a3)


def _t_j2zero_upper(rng, r):
    a = NilTuple.of(J2, _strict_upper(rng, r), _strict_upper(rng, r))
    return a, _zero_first(rng, _strict_upper(rng, r), _strict_upper(rng, r))


TEMPLATES: dict[str, Callable] = {
    "j2j2-wII-wIII": _t_j2j2_wii_wiii,
    "j2j2-wI-lower": _t_j2j2_wi_lower,
    "j2j2-wI-upper": _t_j2j2_wi_upper,
    "j1zero-vIII": _t_j1zero_viii,
    "j1zero-block": _t_j1zero_block,
    "j1zero-a36": _t_j1zero_a36,
    "j2zero-upper": _t_j2zero_upper,
}


@dataclass(frozen=True)
class PairFamily:
    tag: str
    template: str | None = None
    entry_range: int = ENTRY_RANGE

    def __post_init__(self):
        if self.tag not in FAMILY_TAGS:
            raise InputError(f"unknown family {self.tag!r}; choose from {', '.join(FAMILY_TAGS)}")
        if self.tag == "Template" and self.template not in TEMPLATES:
            raise InputError(f"unknown template {self.template!r}; choose from {', '.join(TEMPLATES)}")

    @property
    def name(self) -> str:
        return f"Template:{self.template}" if self.tag == "Template" else self.tag

    @classmethod
    def parse(cls, text: str) -> list["PairFamily"]:
        """'Conjugate', 'Template' (every template) or 'Template:<id>'."""
        tag, _, tmpl = text.partition(":")
        if tag == "Template" and not tmpl:
            return [cls("Template", t) for t in TEMPLATES]
        return [cls(tag, tmpl or None)]


ALL_FAMILIES = [PairFamily("Conjugate"), PairFamily("StrictUpper")] + [
    PairFamily("Template", t) for t in TEMPLATES
] + [PairFamily("Independent")]


def gen_pair(family: PairFamily, rng: random.Random) -> tuple[NilTuple, NilTuple]:
    r = family.entry_range
    if family.tag == "Conjugate":
        t = random_tuple(rng, 3)
        return t, _unimodular(rng).apply(t)
    if family.tag == "StrictUpper":
        return tuple(NilTuple(tuple(_strict_upper(rng, r) for _ in range(3))) for _ in range(2))
    if family.tag == "Independent":
        return random_tuple(rng, 3), random_tuple(rng, 3)
    a, b = TEMPLATES[family.template](rng, r)
    perm = tuple(rng.sample((1, 2, 3), 3))
    a, b = permute_indices(a, perm), permute_indices(b, perm)
    return _unimodular(rng).apply(a), _unimodular(rng).apply(b)


# -- theorem fuzz ----------------------------------------------------------------------

@dataclass
class FamilyCounts:
    checked: int = 0
    s33_agreeing: int = 0
    violations: int = 0

    def merge(self, other: "FamilyCounts") -> "FamilyCounts":
        return FamilyCounts(*(x + y for x, y in zip(self.astuple(), other.astuple())))

    def astuple(self):
        return self.checked, self.s33_agreeing, self.violations


@dataclass
class TheoremReport:
    seed: int
    families: dict = field(default_factory=dict)
    violation_payloads: list = field(default_factory=list)

    @property
    def checked(self) -> int:
        return sum(c.checked for c in self.families.values())

    @property
    def s33_agreeing(self) -> int:
        return sum(c.s33_agreeing for c in self.families.values())

    @property
    def violations(self) -> int:
        return sum(c.violations for c in self.families.values())

    def merge(self, other: "TheoremReport") -> "TheoremReport":
        fams = dict(self.families)
        for k, v in other.families.items():
            fams[k] = fams[k].merge(v) if k in fams else v
        return TheoremReport(self.seed, fams, self.violation_payloads + other.violation_payloads)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "checked": self.checked,
            "s33_agreeing": self.s33_agreeing,
            "violations": self.violations,
            "families": {k: dict(zip(("checked", "s33_agreeing", "violations"), v.astuple()))
                         for k, v in sorted(self.families.items())},
            "violation_payloads": self.violation_payloads,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def _trial_rng(kind: str, seed: int, family: str, i: int) -> random.Random:
    return random.Random(f"{kind}:{seed}:{family}:{i}")


def fuzz_theorem(trials: int, seed: int, family=None, start: int = 0,
                 repro_path=None) -> TheoremReport:
    """For each pair: if no word of S33 separates it, no word of P33 may either.

    ``family`` is a PairFamily, a family name ("Template" means all
    templates), or None for every family.  ``start`` offsets the trial index
    so disjoint slices of one run can be merged.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    if family is None:
        fams = ALL_FAMILIES
    elif isinstance(family, PairFamily):
        fams = [family]
    else:
        fams = PairFamily.parse(family)
    s33, pp = builtin_set("S33"), builtin_set("Pprime33")
    report = TheoremReport(seed)
    for fam in fams:
        counts = FamilyCounts()
        for i in range(start, start + trials):
            a, b = gen_pair(fam, _trial_rng("theorem", seed, fam.name, i))
            ea, eb = WordEvaluator(a), WordEvaluator(b)
            counts.checked += 1
            if any(ea(w) != eb(w) for w in s33):
                continue
            counts.s33_agreeing += 1
            bad = next((w for w in pp if ea(w) != eb(w)), None)
            if bad is not None:
                counts.violations += 1
                report.violation_payloads.append({
                    "seed": seed, "family": fam.name, "trial": i, "word": str(bad),
                    "a": tuple_to_document(a), "b": tuple_to_document(b),
                })
        report.families[fam.name] = counts
    if repro_path is not None and report.violation_payloads:
        Path(repro_path).write_text(json.dumps(report.violation_payloads, indent=1))
    return report


def template_drift(trials: int, seed: int) -> dict:
    """Template pairs that fail S33 agreement (must be zero for every template)."""
    out = {}
    for fam in ALL_FAMILIES:
        if fam.tag == "Template":
            rep = fuzz_theorem(trials, seed, fam)
            c = rep.families[fam.name]
            out[fam.template] = c.checked - c.s33_agreeing
    return out


# -- canonical form fuzz -----------------------------------------------------------------

def _permutation_matrix(rng: random.Random) -> ChangeOfBasis:
    p = rng.sample(range(3), 3)
    g = Matrix([[int(p[i] == j) for j in range(3)] for i in range(3)])
    return ChangeOfBasis(g, g.transpose())


def _sparse_nilpotent(rng: random.Random) -> Matrix:
    n = Matrix([[rng.randint(-ENTRY_RANGE, ENTRY_RANGE) if j > i and rng.random() < 0.5 else 0
                 for j in range(3)] for i in range(3)])
    return _permutation_matrix(rng).apply(n)


@dataclass
class CanonReport:
    stabilizer: str
    seed: int
    trials: int = 0
    failures: Counter = field(default_factory=Counter)
    tags: Counter = field(default_factory=Counter)
    examples: list = field(default_factory=list)

    @property
    def expected_tags(self) -> tuple:
        return V_KINDS if self.stabilizer == "J1" else W_KINDS

    @property
    def missing_tags(self) -> list:
        return [k for k in self.expected_tags if not self.tags[k]]

    @property
    def ok(self) -> bool:
        return not self.failures and not self.missing_tags

    def merge(self, other: "CanonReport") -> "CanonReport":
        return CanonReport(self.stabilizer, self.seed, self.trials + other.trials,
                           self.failures + other.failures, self.tags + other.tags,
                           self.examples + other.examples)

    def to_dict(self) -> dict:
        return {
            "stabilizer": self.stabilizer,
            "seed": self.seed,
            "trials": self.trials,
            "failures": dict(sorted(self.failures.items())),
            "tags": {k: self.tags[k] for k in self.expected_tags},
            "missing_tags": self.missing_tags,
            "examples": self.examples,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def fuzz_canon(trials: int, seed: int, stabilizer: str = "J2", start: int = 0) -> CanonReport:
    """Reduce random (J, A2) and check every postcondition of the reduction.

    Half the inputs are sparse permuted strictly upper matrices so that the
    low-dimensional templates are reached as well as the generic ones.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    if stabilizer not in STABILIZERS:
        raise InputError("stabilizer must be J1 or J2")
    jm, reduce = STABILIZERS[stabilizer]
    p33 = builtin_set("P33")
    rep = CanonReport(stabilizer, seed)
    for i in range(start, start + trials):
        rng = _trial_rng("canon", seed, stabilizer, i)
        a2 = _sparse_nilpotent(rng) if rng.random() < 0.5 else random_nilpotent(rng)
        a3 = random_nilpotent(rng)
        res = reduce(a2)
        g = res.g
        checks = {
            "inverse": g.g @ g.g_inv == Matrix.identity(3),
            "fixes_jordan": g.apply(jm) == jm,
            "conjugate": res.matrix == g.apply(a2),
            "one_template": matching_templates(res.matrix, stabilizer) == [res.kind],
            "idempotent": (lambda r2: r2.g.is_identity() and r2.kind == res.kind)(reduce(res.matrix)),
        }
        before = NilTuple.of(jm, a2, a3)
        after = NilTuple.of(jm, res.matrix, g.apply(a3))
        ea, eb = WordEvaluator(before), WordEvaluator(after)
        checks["p33_preserved"] = all(ea(w) == eb(w) for w in p33)
        rep.trials += 1
        rep.tags[res.kind] += 1
        for name, passed in checks.items():
            if not passed:
                rep.failures[name] += 1
                if len(rep.examples) < 5:
                    rep.examples.append({"trial": i, "check": name,
                                         "a2": tuple_to_document(NilTuple.of(a2))["matrices"][0]})
    return rep
