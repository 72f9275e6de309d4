"""Constructive normal forms for nilpotent 3x3 matrices and pairs of triples.

A nilpotent matrix is brought to 0, J1 = E12 or J2 = E12 + E23.  A second
matrix is then normalized by the subgroup fixing J1 (templates V_I..V_IV) or
J2 (templates W_I..W_V), using explicit changes of basis whose free
parameters are pinned to 1 (or 0 for additive ones) for determinism.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .exact import J1, J2, Matrix, NilTuple, is_nilpotent
from .linalg import nullspace, rank

V_KINDS = ("V_I", "V_II", "V_III", "V_IV")
W_KINDS = ("W_I", "W_II", "W_III", "W_IV", "W_V")
JORDAN_TAGS = ("Zero", "J1", "J2")
PAIR_CASES = ("a", "b", "c", "d", "e", "degenerate")



@dataclass(frozen=True)
class ChangeOfBasis:
    g: Matrix
    g_inv: Matrix

    def __post_init__(self):
        if self.g @ self.g_inv != Matrix.identity(self.g.size):
            raise InputError("g_inv is not the inverse of g")

    @classmethod
    def of(cls, g: Matrix) -> "ChangeOfBasis":
        return cls(g, g.inverse())

    @classmethod
    def identity(cls, n: int = 3) -> "ChangeOfBasis":
        e = Matrix.identity(n)
        return cls(e, e)

    def is_identity(self) -> bool:
        return self.g == Matrix.identity(self.g.size)

    def apply(self, x):
        if isinstance(x, NilTuple):
            return NilTuple(tuple(self.g @ m @ self.g_inv for m in x.mats))
        return self.g @ x @ self.g_inv

    def then(self, other: "ChangeOfBasis") -> "ChangeOfBasis":
        """Apply self first, then other."""
        return ChangeOfBasis(other.g @ self.g, self.g_inv @ other.g_inv)


@dataclass(frozen=True)
class CanonResult:
    g: ChangeOfBasis
    kind: str
    matrix: Matrix


def _require_nilpotent(a: Matrix):
    if a.size != 3:
        raise InputError("canonical forms are implemented for 3x3 matrices")
    if not is_nilpotent(a):
        raise InputError("input matrix is not nilpotent")


def _entries(a: Matrix):
    # a1..a9 in row-major order, returned 0-based
    return a.flat()


# -- Jordan form -------------------------------------------------------------------

def _apply_vec(a: Matrix, v):
    return [sum(a.rows[i][k] * v[k] for k in range(3)) for i in range(3)]


def _unit(i: int):
    return [Fraction(int(k == i)) for k in range(3)]


def nilpotent_jordan(a: Matrix) -> tuple[ChangeOfBasis, str]:
    """Return (g, tag) with g a g^{-1} equal to 0, J1 or J2 (rank 0, 1, 2)."""
    _require_nilpotent(a)
    r = a.rank()
    if r == 0:
        return ChangeOfBasis.identity(), "Zero"
    if r == 2:
        a2 = a @ a
        v = next(_unit(i) for i in range(3) if any(_apply_vec(a2, _unit(i))))
        cols = [_apply_vec(a2, v), _apply_vec(a, v), v]
        tag = "J2"
    else:
        v = next(_unit(i) for i in range(3) if any(_apply_vec(a, _unit(i))))
        av = _apply_vec(a, v)
        w = next(k for k in nullspace(a.tolist(), 3) if rank([av, k]) == 2)
        cols = [av, v, w]
        tag = "J1"
    p = Matrix([[cols[j][i] for j in range(3)] for i in range(3)])
    # columns of p form the Jordan basis, so p^{-1} a p is the Jordan matrix
    return ChangeOfBasis(p.inverse(), p), tag


# -- stabilizer of J1 ----------------------------------------------------------------

def _stab_j1(g1, g2, g3, g9) -> Matrix:
    return Matrix([[g1, g2, g3], [0, g1, 0], [0, 0, g9]])


def stab_canon_J1(a2: Matrix) -> CanonResult:
    """Normalize ``a2`` by conjugations that fix J1."""
    _require_nilpotent(a2)
    a1, a2_, a3, a4, a5, a6, a7, a8, a9 = _entries(a2)
    if a4 == 0 and a7 == 0 and a8 == 0:
        g, kind = _stab_j1(1, 0, 0, 1), "V_I"
    elif a4 == 0 and a7 == 0:
        g2 = Fraction(0)
        g3 = ((a1 - a5) * g2 - a2_) / a8
        g, kind = _stab_j1(1, g2, g3, 1 / a8), "V_II"
    elif a4 == 0:
        g, kind = _stab_j1(1, a8 / a7, a9 / a7, 1 / a7), "V_III"
    else:
        g, kind = _stab_j1(1, a5 / a4, a6 / a4, 1), "V_IV"
    cob = ChangeOfBasis.of(g)
    return CanonResult(cob, kind, cob.apply(a2))


# -- stabilizer of J2 ----------------------------------------------------------------

def _stab_j2(g2, g3) -> Matrix:
    return Matrix([[1, g2, g3], [0, 1, g2], [0, 0, 1]])


def stab_canon_J2(a2: Matrix) -> CanonResult:
    """Normalize ``a2`` by conjugations that fix J2."""
    _require_nilpotent(a2)
    a1, a2_, a3, a4, a5, a6, a7, a8, a9 = _entries(a2)
    if a7 != 0:
        g, kind = _stab_j2(-a4 / a7, (a4 * a4 / a7 - a1) / a7), "W_V"
    elif a4 == 0 and a8 == 0:
        g, kind = _stab_j2(0, 0), "W_I"
    elif a4 == 0:
        g2 = -a5 / a8
        g3 = -(a2_ + (a1 * a5 - a5 * a5) / a8) / a8
        g, kind = _stab_j2(g2, g3), "W_II"
    elif a8 == 0:
        g2 = -a1 / a4
        g3 = (a1 * a1 + a4 * a6 + a1 * (a5 - a9)) / (a4 * a4)
        g, kind = _stab_j2(g2, g3), "W_III"
    else:
        g, kind = _stab_j2(-a1 / a4, (a1 * a5 / a4 - a2_) / a8), "W_IV"
    cob = ChangeOfBasis.of(g)
    return CanonResult(cob, kind, cob.apply(a2))


# -- template predicates ----------------------------------------------------------------

def _template_checks(m: Matrix) -> dict:
    a1, a2, a3, a4, a5, a6, a7, a8, a9 = m.flat()
    return {
        "V_I": a4 == a7 == a8 == 0 and a1 == a5 == a9 == 0,
        "V_II": a1 == a2 == a4 == a7 == 0 and a8 == 1 and a6 == -a5 * a5 and a9 == -a5,
        "V_III": a4 == a8 == a9 == 0 and a7 == 1 and a5 == -a1 and a3 == -a1 * a1,
        "V_IV": a4 != 0 and a5 == a6 == 0 and a9 == -a1,
        "W_I": a1 == a4 == a5 == a7 == a8 == a9 == 0,
        "W_II": a8 != 0 and a1 == a2 == a4 == a5 == a6 == a7 == a9 == 0,
        "W_III": a4 != 0 and a1 == a2 == a5 == a6 == a7 == a8 == a9 == 0,
        "W_IV": a4 != 0 and a8 != 0 and a1 == a2 == a3 == a7 == 0 and a9 == -a5,
        "W_V": a7 != 0 and a1 == a4 == 0 and a9 == -a5,
    }


def matching_templates(m: Matrix, family: str) -> list[str]:
    """Template tags (V_* for family "J1", W_* for "J2") whose pattern ``m`` fits."""
    kinds = {"J1": V_KINDS, "J2": W_KINDS}[family]
    checks = _template_checks(m)
    return [k for k in kinds if checks[k]]


STABILIZERS = {"J1": (J1, stab_canon_J1), "J2": (J2, stab_canon_J2)}


# -- pairs of triples ----------------------------------------------------------------------

_CASE_BY_RANKS = {(2, 2): "a", (2, 1): "b", (1, 1): "c", (1, 0): "d", (2, 0): "e"}


@dataclass(frozen=True)
class PairTransforms:
    kept: tuple
    swapped: bool
    g_a: ChangeOfBasis
    g_b: ChangeOfBasis

    def is_identity(self) -> bool:
        return not self.swapped and self.g_a.is_identity() and self.g_b.is_identity()


@dataclass(frozen=True)
class PairClass:
    case: str
    a: NilTuple
    b: NilTuple
    transforms: PairTransforms
    second_kinds: tuple = field(default=(None, None))


def _normalize_one(t: NilTuple) -> tuple[ChangeOfBasis, str, str | None]:
    g, tag = nilpotent_jordan(t.mats[0])
    kind = None
    if tag != "Zero" and t.d >= 2:
        second = g.apply(t.mats[1])
        res = STABILIZERS[tag][1](second)
        g = g.then(res.g)
        kind = res.kind
    return g, tag, kind


def classify_pair(a: NilTuple, b: NilTuple) -> PairClass:
    """Reduce a pair of tuples to one of the five first-matrix cases.

    Indices where both tuples vanish are dropped; each tuple is conjugated
    independently so its first matrix is a Jordan matrix (and, when that is
    J1 or J2, its second matrix is in stabilizer normal form); the tuples are
    swapped when b's first matrix has the larger rank.
    """
    if a.d != b.d or a.size != 3 or b.size != 3:
        raise InputError("classify_pair expects two triples-like tuples of 3x3 matrices with equal d")
    kept = tuple(i + 1 for i in range(a.d) if not (a.mats[i].is_zero() and b.mats[i].is_zero()))
    a = NilTuple(tuple(a.mats[i - 1] for i in kept))
    b = NilTuple(tuple(b.mats[i - 1] for i in kept))
    ident = ChangeOfBasis.identity()
    if not kept:
        return PairClass("degenerate", a, b, PairTransforms(kept, False, ident, ident))
    ga, tag_a, kind_a = _normalize_one(a)
    gb, tag_b, kind_b = _normalize_one(b)
    ra, rb = JORDAN_TAGS.index(tag_a), JORDAN_TAGS.index(tag_b)
    swapped = rb > ra
    if swapped:
        a, b, ga, gb, ra, rb, kind_a, kind_b = b, a, gb, ga, rb, ra, kind_b, kind_a
    case = _CASE_BY_RANKS[(ra, rb)]
    return PairClass(
        case,
        ga.apply(a),
        gb.apply(b),
        PairTransforms(kept, swapped, ga, gb),
        (kind_a, kind_b),
    )
