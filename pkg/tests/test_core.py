import pytest
from hypothesis import given
from hypothesis import strategies as st

from aritylab.core import (CapExceeded, DefSet, FinStructure, Signature, StructureError,
                           expand_with, pure_set, restrict_signature, structure,
                           tuple_coords, tuple_index, index_tuple, validate_structure)
from aritylab.factory import circular_order, linear_order

from conftest import structures


def test_validate_ok():
    s = structure(3, {"K2": (2, {(0, 1), (1, 2), (0, 2)})})
    assert validate_structure(s).ok


def test_validate_out_of_range():
    s = FinStructure(3, Signature((("K2", 2),)), (frozenset({(0, 1), (0, 3)}),))
    v = validate_structure(s)
    assert not v.ok
    assert any("element 3 ≥ size 3" in x for x in v.violations)


def test_validate_arity_mismatch():
    s = FinStructure(3, Signature((("K2", 2),)), (frozenset({(0, 1, 2)}),))
    v = validate_structure(s)
    assert not v.ok and "arity mismatch" in v.violations[0]


def test_structure_rejects_invalid():
    with pytest.raises(StructureError):
        structure(2, {"R": (1, {(5,)})})


def test_signature_invariants():
    with pytest.raises(StructureError):
        Signature((("R", 1), ("R", 2)))
    with pytest.raises(StructureError):
        Signature((("R", 0),))
    with pytest.raises(StructureError):
        Signature((("1R", 1),))


def test_size_cap():
    with pytest.raises(CapExceeded):
        pure_set(13)
    assert FinStructure(13, Signature(), (), size_cap=16).size == 13


def test_expand_identity_relation():
    diag = DefSet(2, {(0, 0), (1, 1), (2, 2)})
    s = expand_with(pure_set(3), "E", diag)
    assert s.signature.symbols == (("E", 2),)
    assert s["E"] == diag.tuples


def test_expand_with_own_relation():
    lin = linear_order(3)
    s = expand_with(lin, "L", lin.relation("K2"))
    assert s["L"] == s["K2"]
    assert lin.signature.names == ("K2",)


def test_expand_errors():
    with pytest.raises(StructureError):
        expand_with(pure_set(3), "E", DefSet(0, {()}))
    with pytest.raises(StructureError):
        expand_with(linear_order(3), "K2", DefSet(1, {(0,)}))
    with pytest.raises(StructureError):
        expand_with(pure_set(3), "E", DefSet(1, {(3,)}))


def test_restrict():
    s = expand_with(circular_order(4), "K2", linear_order(4).relation("K2"))
    only = restrict_signature(s, {"K3"})
    assert only.signature.names == ("K3",)
    assert restrict_signature(s, {"K2", "K3"}) == s
    assert restrict_signature(s, set()) == pure_set(4)
    with pytest.raises(StructureError):
        restrict_signature(s, {"K9"})


def test_defset_zero_arity():
    assert DefSet(0, {()}).truth
    assert not DefSet(0).truth
    with pytest.raises(StructureError):
        DefSet(2, {(0,)})


def test_index_roundtrip():
    coords = tuple_coords(3, 3)
    for i, row in enumerate(coords.tolist()):
        assert tuple_index(row, 3) == i
        assert index_tuple(i, 3, 3) == tuple(row)
    with pytest.raises(CapExceeded):
        tuple_coords(12, 7, work_cap=10**6)


@given(structures(), st.data())
def test_expand_then_restrict_roundtrip(s, data):
    k = data.draw(st.integers(1, 3))
    cells = st.tuples(*[st.integers(0, s.size - 1)] * k)
    r = DefSet(k, data.draw(st.sets(cells, max_size=8)))
    e = expand_with(s, "New", r)
    assert validate_structure(e).ok
    assert restrict_signature(e, s.signature.names) == s
    assert validate_structure(restrict_signature(e, {"New"})).ok
