import random

import pytest
from hypothesis import given, settings

from conftest import nil_tuples, nilpotents
from nilinv.canon import (
    STABILIZERS, ChangeOfBasis, classify_pair, matching_templates, nilpotent_jordan, stab_canon_J1,
    stab_canon_J2,
)
from nilinv.errors import InputError
from nilinv.exact import E, J1, J2, Matrix, NilTuple
from nilinv.span import random_nilpotent
from nilinv.words import builtin_set, evaluate_set

Z = Matrix.zero(3)


def test_jordan_examples():
    g, tag = nilpotent_jordan(J2)
    assert tag == "J2" and g.is_identity()
    g, tag = nilpotent_jordan(E(2, 1))
    assert tag == "J1" and g.apply(E(2, 1)) == E(1, 2)
    # a basis permutation: one 1 in each row and column
    assert sorted(g.g.flat()) == [0] * 6 + [1] * 3
    g, tag = nilpotent_jordan(Z)
    assert tag == "Zero" and g.is_identity()
    with pytest.raises(InputError):
        nilpotent_jordan(E(1, 1))


@settings(max_examples=200)
@given(nilpotents())
def test_jordan_random(a):
    g, tag = nilpotent_jordan(a)
    target = {0: Z, 1: J1, 2: J2}[a.rank()]
    assert g.apply(a) == target
    assert tag == {0: "Zero", 1: "J1", 2: "J2"}[a.rank()]


def test_stab_j1_examples():
    upper = Matrix([[0, 2, -1], [0, 0, 3], [0, 0, 0]])
    r = stab_canon_J1(upper)
    assert (r.kind, r.g.is_identity(), r.matrix) == ("V_I", True, upper)
    r = stab_canon_J1(E(3, 2))
    assert r.kind == "V_II" and r.g.is_identity() and r.matrix[1, 1] == 0 and r.matrix[0, 2] == 0
    r = stab_canon_J1(E(2, 1))
    assert r.kind == "V_IV" and r.g.is_identity() and r.matrix[1, 0] == 1


def test_stab_j2_examples():
    r = stab_canon_J2(E(3, 2))
    assert (r.kind, r.g.is_identity()) == ("W_II", True) and r.matrix[2, 1] == 1 and r.matrix[0, 2] == 0
    r = stab_canon_J2(E(3, 1))
    assert (r.kind, r.g.is_identity()) == ("W_V", True) and r.matrix[2, 0] == 1
    upper = Matrix([[0, 1, 5], [0, 0, -2], [0, 0, 0]])
    r = stab_canon_J2(upper)
    assert (r.kind, r.g.is_identity(), r.matrix) == ("W_I", True, upper)


def test_stab_rejects_non_nilpotent():
    for f in (stab_canon_J1, stab_canon_J2):
        with pytest.raises(InputError):
            f(E(1, 1))
        with pytest.raises(InputError):
            f(E(1, 2, 2))


def _dispatch_j1(a):
    a1, a2, a3, a4, a5, a6, a7, a8, a9 = a.flat()
    if a4 == a7 == a8 == 0:
        return "V_I"
    if a4 == a7 == 0:
        return "V_II"
    if a4 == 0:
        return "V_III"
    return "V_IV"


def _dispatch_j2(a):
    a1, a2, a3, a4, a5, a6, a7, a8, a9 = a.flat()
    if a4 == a7 == a8 == 0:
        return "W_I"
    if a4 == a7 == 0:
        return "W_II"
    if a7 == a8 == 0:
        return "W_III"
    if a7 == 0:
        return "W_IV"
    return "W_V"


def _sparse(rng):
    while True:
        rows = [[0] * 3 for _ in range(3)]
        for c in rng.sample(range(9), rng.randint(1, 3)):
            if c // 3 != c % 3:
                rows[c // 3][c % 3] = rng.choice([-2, -1, 1, 3])
        m = Matrix(rows)
        try:
            NilTuple.of(m)
            return m
        except InputError:
            continue


@pytest.mark.parametrize("fam", ["J1", "J2"])
def test_stabilizer_postconditions(fam):
    jm, reduce = STABILIZERS[fam]
    dispatch = _dispatch_j1 if fam == "J1" else _dispatch_j2
    rng = random.Random(11)
    seen = set()
    p33 = builtin_set("P33")
    for i in range(1500):
        a = _sparse(rng) if i % 2 else random_nilpotent(rng)
        r = reduce(a)
        assert r.kind == dispatch(a)
        assert r.g.apply(jm) == jm
        assert r.matrix == r.g.g @ a @ r.g.g_inv
        assert matching_templates(r.matrix, fam) == [r.kind]
        again = reduce(r.matrix)
        assert again.g.is_identity() and again.kind == r.kind
        if i % 50 == 0:
            a3 = random_nilpotent(rng)
            assert evaluate_set(NilTuple.of(jm, a, a3), p33) == evaluate_set(
                NilTuple.of(jm, r.matrix, r.g.apply(a3)), p33)
        seen.add(r.kind)
    assert len(seen) == (4 if fam == "J1" else 5)


def test_template_side_relations():
    # V_II: (2,3) entry is -(a5)^2; V_III: (1,3) entry is -(a1)^2; W_IV: lower block trace free
    rng = random.Random(5)
    for _ in range(400):
        a = random_nilpotent(rng)
        for fam in ("J1", "J2"):
            r = STABILIZERS[fam][1](a)
            m = r.matrix
            if r.kind == "V_II":
                assert m[1, 2] == -m[1, 1] ** 2
            if r.kind == "V_III":
                assert m[0, 2] == -m[0, 0] ** 2
            if r.kind == "W_IV":
                assert m[1, 1] + m[2, 2] == 0 and m[1, 0] != 0 and m[2, 1] != 0


def test_change_of_basis_validation():
    with pytest.raises(InputError):
        ChangeOfBasis(Matrix.identity(3), J2 + Matrix.identity(3))
    g = ChangeOfBasis.of(Matrix([[1, 1, 0], [0, 1, 0], [0, 0, 2]]))
    h = ChangeOfBasis.of(Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))
    assert g.then(h).apply(J2) == h.apply(g.apply(J2))


# -- pair classification ------------------------------------------------------------

def test_classify_cases():
    a = NilTuple.of(E(2, 1) + E(3, 2), E(1, 3), Z)
    b = NilTuple.of(J2, E(3, 1), Z)
    pc = classify_pair(a, b)
    assert pc.case == "a" and pc.transforms.kept == (1, 2)
    pc = classify_pair(NilTuple.of(E(2, 1), J2, Z), NilTuple.of(Z, E(1, 3), Z))
    assert pc.case == "d" and not pc.transforms.swapped
    pc = classify_pair(NilTuple.of(Z, E(1, 3), J1), NilTuple.of(J2, Z, E(2, 1)))
    assert pc.case == "e" and pc.transforms.swapped
    assert pc.a.mats[0] == J2 and pc.b.mats[0] == Z
    assert classify_pair(NilTuple.zeros(3), NilTuple.zeros(3)).case == "degenerate"
    pc = classify_pair(NilTuple.of(E(1, 3), Z, Z), NilTuple.of(J2, Z, E(1, 2)))
    assert pc.case == "b" and pc.transforms.swapped and pc.transforms.kept == (1, 3)


@settings(max_examples=120, deadline=None)
@given(nil_tuples(), nil_tuples())
def test_classify_invariants(a, b):
    rng = random.Random(hash((a, b)) & 0xFFFF)
    # sprinkle zeros so dropping and every rank combination occurs
    mats_a, mats_b = list(a.mats), list(b.mats)
    for k in range(3):
        if rng.random() < 0.3:
            mats_a[k] = Z
        if rng.random() < 0.3:
            mats_b[k] = Z
        if rng.random() < 0.2:
            mats_a[k] = mats_b[k] = Z
    a, b = NilTuple(tuple(mats_a)), NilTuple(tuple(mats_b))
    pc = classify_pair(a, b)
    kept = pc.transforms.kept
    assert all(not (a.mats[i - 1].is_zero() and b.mats[i - 1].is_zero()) for i in kept)
    if pc.case == "degenerate":
        return
    src_a, src_b = (b, a) if pc.transforms.swapped else (a, b)
    sub = lambda t: NilTuple(tuple(t.mats[i - 1] for i in kept))
    assert pc.transforms.g_a.apply(sub(src_a)) == pc.a
    assert pc.transforms.g_b.apply(sub(src_b)) == pc.b
    assert pc.a.mats[0] in (J1, J2) or pc.a.mats[0] == Z
    assert pc.b.mats[0].rank() <= pc.a.mats[0].rank()
    again = classify_pair(pc.a, pc.b)
    assert again.case == pc.case and again.transforms.is_identity()
    assert again.a == pc.a and again.b == pc.b


def test_classify_rejects_mismatch():
    with pytest.raises(InputError):
        classify_pair(NilTuple.zeros(3), NilTuple.zeros(2))
