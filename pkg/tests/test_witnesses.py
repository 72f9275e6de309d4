import json
from dataclasses import replace

import pytest

from nilinv.errors import InputError
from nilinv.exact import E, J2, Matrix, NilTuple
from nilinv.io import tuple_from_document
from nilinv.witnesses import (
    S32_PAIRS, TRIPLES, catalog, catalog_json, verify_minimality, verify_witness,
)
from nilinv.words import builtin_set, eval_word, word


def _by_id():
    return {r.id: r for r in catalog()}


def test_catalog_covers_every_set_element():
    recs = catalog()
    assert len([r for r in recs if r.set_name == "S33"]) >= 26
    assert len([r for r in recs if r.set_name == "S32"]) == 5
    assert len({r.id for r in recs}) == len(recs)


def test_two_by_two_claim_values():
    r = _by_id()["s2d2-12"]
    assert (eval_word(r.tuple_a, "12"), eval_word(r.tuple_b, "12")) == (0, 1)
    r = _by_id()["s2d3-123"]
    assert (eval_word(r.tuple_a, "123"), eval_word(r.tuple_b, "123")) == (-1, 1)
    for w in ("12", "13", "23"):
        assert eval_word(r.tuple_a, w) == eval_word(r.tuple_b, w)


def test_s32_transcribed_values():
    r = _by_id()["s32-112"]
    assert (eval_word(r.tuple_a, "112"), eval_word(r.tuple_b, "112")) == (0, -1)
    r = _by_id()["s32-1122"]
    assert r.tuple_a.mats == (J2, Matrix([[0, -2, 1], [2, 0, 1], [2, 2, 0]]))
    assert r.tuple_b.mats[1] == Matrix([[0, 0, 2], [0, 0, -1], [2, 4, 0]])
    assert set(S32_PAIRS) == {"12", "112", "1122", "112212"}
    assert set(TRIPLES) == {"123", "1123", "11213"}


@pytest.mark.parametrize("rec", catalog(), ids=lambda r: r.id)
def test_each_record_verifies(rec):
    rep = verify_witness(rec)
    assert rep.ok, (rep.failing_word, rep.values)
    assert rep.values[0] != rep.values[1]


def test_minimality_summaries():
    s33 = verify_minimality("S33")
    assert s33.passed and s33.summary() == "26/26 S33" and s33.against == "P33"
    assert verify_minimality("S32").summary() == "5/5 S32"
    assert verify_minimality("S2", 2).summary() == "1/1 S2"
    assert verify_minimality("S2", 3).summary() == "4/4 S2"
    assert verify_minimality("S2", 1).passed  # empty set
    with pytest.raises(InputError):
        verify_minimality("S2")
    with pytest.raises(InputError):
        verify_minimality("S2", 4)
    with pytest.raises(InputError):
        verify_minimality("P33")


def test_corrupted_record_reports_failing_word():
    r = _by_id()["s32-1122"]
    bad = replace(r, tuple_b=NilTuple.of(J2, E(3, 2)))
    rep = verify_witness(bad)
    assert not rep.ok and rep.failing_word == word("12")
    # a minimality check that only has the broken record reports it missing
    res = verify_minimality("S32", records=[x if x.id != r.id else bad for x in catalog()])
    assert not res.passed and res.missing == (word("1122"),)


def test_swapped_tuples_do_not_separate():
    r = _by_id()["s32-12"]
    same = replace(r, tuple_b=r.tuple_a)
    rep = verify_witness(same)
    assert rep.agree_ok and not rep.separate_ok


def test_malformed_records_raise():
    r = _by_id()["s32-12"]
    with pytest.raises(InputError):
        verify_witness(replace(r, tuple_b=NilTuple.of(J2, E(3, 2), E(1, 2))))
    with pytest.raises(InputError):
        verify_witness(replace(r, target=word("1212")))
    with pytest.raises(InputError):
        verify_witness(replace(r, tuple_a=NilTuple.zeros(2, 2), tuple_b=NilTuple.zeros(2, 2)))


def test_derived_records_state_their_source():
    recs = [r for r in catalog() if r.set_name == "S33"]
    assert [str(r.target) for r in recs] == [str(w) for w in builtin_set("S33")]
    for r in recs:
        assert r.source == "transcribed" or r.source.startswith("derived from ")


def test_catalog_json_roundtrip():
    doc = json.loads(catalog_json())
    by_id = _by_id()
    assert len(doc) == len(by_id)
    for entry in doc:
        r = by_id[entry["id"]]
        assert tuple_from_document(entry["a"]) == r.tuple_a
        assert tuple_from_document(entry["b"]) == r.tuple_b
        assert entry["target"] == str(r.target)
