"""Replay of the explicit triples that pin down the coefficients of a supposed
decomposition, for the three indecomposability items.

Each item posits an identity  LHS = sum_u u * P_u  valid on all nilpotent
triples, with unknown coefficients u.  Evaluating both sides at a concrete
triple gives one linear equation in the unknowns.  A step lists the triples
used and the conclusion drawn from them; the replay checks that, together
with the earlier conclusions, the evaluated equations are equivalent to the
stated conclusion.  Terminal steps must yield an inconsistent system.

Where the printed triple does not produce the printed conclusion, the step
carries a corrected triple list; both outcomes are reported.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .exact import J2, E, Matrix, NilTuple
from .linalg import rank, rref, solve
from .words import WordEvaluator, word

C = Matrix([[0, -1, -1], [0, 1, 1], [1, 0, -1]])
D = Matrix([[0, 0, 0], [0, 1, 1], [0, -1, -1]])


@dataclass(frozen=True)
class Term:
    coef: str | None  # unknown name; None for a known coefficient of 1
    words: tuple

    def value(self, ev: WordEvaluator) -> Fraction:
        out = Fraction(1)
        for w in self.words:
            out *= ev(word(w))
        return out


def _terms(text: str) -> tuple:
    """Parse 'a1:11223 a2:22113' or '-:112213' (known coefficient) into terms."""
    out = []
    for item in text.split():
        name, prod = item.split(":")
        out.append(Term(None if name == "-" else name, tuple(prod.split("*"))))
    return tuple(out)


@dataclass(frozen=True)
class Identity:
    name: str
    unknowns: tuple
    lhs: tuple
    rhs: tuple

    def equation(self, t: NilTuple) -> list[Fraction]:
        """Row [c_1..c_n | b] meaning sum c_i u_i = b, from LHS(t) = RHS(t)."""
        ev = WordEvaluator(t)
        row = [Fraction(0)] * (len(self.unknowns) + 1)
        for side, sign in ((self.rhs, 1), (self.lhs, -1)):
            for term in side:
                v = sign * term.value(ev)
                if term.coef is None:
                    row[-1] -= v
                else:
                    row[self.unknowns.index(term.coef)] += v
        return row


@dataclass(frozen=True)
class Step:
    label: str
    triples: tuple
    conclusion: tuple | None  # rows; None for a terminal contradiction
    stated: str
    corrected: tuple | None = None
    note: str = ""


@dataclass
class StepResult:
    item: str
    label: str
    stated: str
    printed_ok: bool
    corrected_ok: bool | None
    residual: Fraction | None = None
    note: str = ""
    equations: list = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return self.printed_ok or bool(self.corrected_ok)


def _row(unknowns, coeffs: dict, const=0) -> list[Fraction]:
    row = [Fraction(0)] * (len(unknowns) + 1)
    for k, v in coeffs.items():
        row[unknowns.index(k)] = Fraction(v)
    row[-1] = Fraction(const)
    return row


def _same_span(a, b) -> bool:
    return rref(a)[0] == rref(b)[0]


def _inconsistent(rows) -> bool:
    n = len(rows[0]) - 1
    return rank(rows) > rank([r[:n] for r in rows])


def _residual(prior, eq) -> Fraction | None:
    """LHS - RHS at the triple once the earlier conclusions fix the RHS."""
    n = len(eq) - 1
    if prior and rank([r[:n] for r in prior] + [eq[:n]]) > rank([r[:n] for r in prior]):
        return None
    x = solve([r[:n] for r in prior], [r[n] for r in prior]) if prior else [Fraction(0)] * n
    if x is None:
        return None
    return eq[n] - sum((c * v for c, v in zip(eq[:n], x)), Fraction(0))


def _check(ident: Identity, prior: list, step_rows: list, conclusion):
    if conclusion is None:
        return _inconsistent(prior + step_rows)
    nontrivial = rank(prior + step_rows) > rank(prior) if prior else rank(step_rows) > 0
    return nontrivial and _same_span(prior + step_rows, prior + list(conclusion))


def _all_perms(t) -> tuple:
    seen = []
    for p in permutations(t):
        if p not in seen:
            seen.append(p)
    return tuple(seen)


def _tr(*mats) -> NilTuple:
    return NilTuple(tuple(mats))


def _item_a():
    u = ("a1", "a2", "b1", "b2", "b3", "b4")
    ident = Identity(
        "a", u,
        _terms("a1:11223 a2:22113"),
        _terms("b1:123*12 b2:132*12 b3:112*23 b4:221*13"),
    )
    r = lambda c, k=0: _row(u, c, k)
    steps = [
        Step("beta3", (_tr(J2, E(2, 3) + E(3, 1), E(1, 3)),), (r({"b3": 1}),), "b3 = 0"),
        Step("alpha1", (_tr(J2, C, E(2, 1)),), (r({"a1": 1}),), "a1 = 0 (contradicts a1 != 0)"),
    ]
    return ident, steps


def _item_b():
    u = ("a1", "a2", "a3", "b1", "b2", "b3", "g")
    ident = Identity(
        "b", u,
        _terms("-:112213"),
        _terms("a1:1122*13 a2:1123*12 a3:1132*12 b1:112*123 b2:112*132 b3:221*113 g:12*12*13"),
    )
    r = lambda c, k=0: _row(u, c, k)
    e21_32 = E(2, 1) - E(3, 2)
    e31_32 = E(3, 1) + E(3, 2)
    a1 = Matrix([[1, 1, 0], [-1, -1, 1], [0, 0, 0]])
    a2 = Matrix([[0, -1, 1], [1, 0, 0], [1, 0, 0]])
    steps = [
        Step("alpha2", (_tr(J2, e31_32, e21_32),), (r({"a2": 1}),), "a2 = 0"),
        Step("gamma", (_tr(J2, e31_32, E(3, 2)),), (r({"g": 1}),), "g = 0"),
        Step("beta2", (_tr(J2, C, E(3, 2)),), (r({"b2": 1, "a1": -1, "b1": -1}),), "b2 = a1 + b1"),
        Step("alpha1", (_tr(J2, C, e31_32),), (r({"a1": 1}, 1),), "a1 = 1"),
        Step("beta1", (_tr(J2, C, e21_32),), (r({"b1": 1}),), "b1 = 0"),
        Step("final", (_tr(a1, a2, E(1, 2)),), None, "0 = -1"),
    ]
    return ident, steps


def _item_c():
    u = ("a1", "a2", "a3", "a4", "a5", "a6", "b1", "b2", "b3", "b4", "b5", "b6", "g")
    ident = Identity(
        "c", u,
        _terms("-:112233"),
        _terms(
            "a1:1123*23 a2:1132*23 a3:2213*13 a4:2231*13 a5:3312*12 a6:3321*12 "
            "b1:123*123 b2:123*132 b3:132*132 b4:112*332 b5:113*223 b6:221*331 g:12*13*23"
        ),
    )
    r = lambda c, k=0: _row(u, c, k)
    e23_31 = E(2, 3) + E(3, 1)
    e31_32 = E(3, 1) + E(3, 2)
    a1 = Matrix([[0, 0, -1], [0, 0, 1], [1, 1, 0]])
    steps = [
        Step("beta1", (_tr(J2, e23_31, E(3, 1)),), (r({"b1": 1}),), "b1 = 0"),
        Step("beta3", (_tr(J2, E(3, 1), e23_31),), (r({"b3": 1}),), "b3 = 0"),
        Step(
            "beta2", (_tr(J2, D, e31_32),), (r({"b2": 1, "g": 1}),), "b2 = -g",
            corrected=_all_perms((J2, D + E(3, 1), E(3, 2))),
            note="conclusion comes from the permutations of (J2, D+E31, E32)",
        ),
        Step(
            "alphas", _all_perms((J2, D + E(3, 1), E(3, 2))),
            tuple(r({f"a{i}": 1, "g": 1}) for i in range(1, 7)), "a1 = ... = a6 = -g",
            corrected=_all_perms((J2, D, e31_32)),
            note="conclusion comes from the permutations of (J2, D, E31+E32)",
        ),
        Step(
            "beta456", _all_perms((J2, J2, e23_31)),
            tuple(r({f"b{i}": 1, "g": -1}) for i in (4, 5, 6)), "b4 = b5 = b6 = g",
        ),
        Step("gamma", (_tr(J2, C, E(2, 1) + E(3, 2)),), (r({"g": 1}),), "g = 0"),
        Step("final", (_tr(a1, J2, E(2, 1) + E(3, 2)),), None, "0 = -1"),
    ]
    return ident, steps


ITEMS = {"a": _item_a, "b": _item_b, "c": _item_c}


def replay_item(name: str) -> list[StepResult]:
    ident, steps = ITEMS[name]()
    prior: list = []
    out = []
    for st in steps:
        rows = [ident.equation(NilTuple(tuple(t))) for t in st.triples]
        printed_ok = _check(ident, prior, rows, st.conclusion)
        corrected_ok = None
        used = rows
        if not printed_ok and st.corrected is not None:
            fixed = [ident.equation(NilTuple(tuple(t))) for t in st.corrected]
            corrected_ok = _check(ident, prior, fixed, st.conclusion)
            used = fixed
        residual = _residual(prior, rows[0]) if st.conclusion is None else None
        out.append(StepResult(ident.name, st.label, st.stated, printed_ok, corrected_ok, residual, st.note, used))
        if st.conclusion is not None:
            prior = prior + list(st.conclusion)
    return out


def replay_pinning_triples() -> list[StepResult]:
    out = []
    for name in ITEMS:
        out += replay_item(name)
    return out
