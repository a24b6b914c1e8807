import pytest

from aritylab.core import CapExceeded, DefSet, pure_set
from aritylab.corpus import generate_corpus
from aritylab.factory import circular_order, linear_order
from aritylab.oracle import (FixtureRecord, naive_automorphisms, naive_is_n_ary, naive_orbits,
                             orbit_fixture_records, read_fixtures, write_fixtures)

from conftest import FIXTURES, read_table


def test_naive_automorphism_examples():
    assert len(naive_automorphisms(pure_set(3))) == 6
    assert naive_automorphisms(linear_order(4)) == ((0, 1, 2, 3),)
    rotations = {tuple((x + d) % 6 for x in range(6)) for d in range(6)}
    assert set(naive_automorphisms(circular_order(6))) == rotations
    with pytest.raises(CapExceeded):
        naive_automorphisms(pure_set(9))


def test_naive_is_n_ary_basics():
    c = circular_order(4)
    for n in range(4):
        assert naive_is_n_ary(c, DefSet.full(4, 2), n)
    with pytest.raises(ValueError):
        naive_is_n_ary(pure_set(3), DefSet(1, {(0,)}), 1)


def test_naive_orbit_listing_order():
    orbits = naive_orbits(circular_order(5), 2)
    assert [min(o) for o in orbits] == [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4)]


def test_fixture_roundtrip(tmp_path):
    records = orbit_fixture_records(circular_order(3), 2, 2)
    path = tmp_path / "f.tsv"
    write_fixtures(path, records)
    assert read_fixtures(path) == records
    assert records[0] == FixtureRecord("circular_3", "O_1_0", 0, True)


def test_fixture_reader_rejects_garbage(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("a\tb\t1\tmaybe\n")
    with pytest.raises(ValueError):
        read_fixtures(path)


def test_committed_corpus_orders():
    orders = dict(read_table("corpus_aut_orders.tsv"))
    for s in generate_corpus():
        assert len(naive_automorphisms(s)) == int(orders[s.name])


def test_committed_verdicts_cover_corpus():
    records = read_fixtures(FIXTURES / "oracle_verdicts.tsv")
    names = {r.structure for r in records}
    assert names == {s.name for s in generate_corpus()}
    assert {r.n for r in records} == {0, 1, 2, 3}
