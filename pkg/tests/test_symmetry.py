import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aritylab.core import DefSet, FinStructure, Signature, pure_set
from aritylab.factory import circular_order, linear_order
from aritylab.oracle import naive_automorphisms, naive_orbits
from aritylab.symmetry import (AutGroup, automorphism_group, is_automorphism, is_invariant,
                               orbit_partition)

from conftest import read_table, structures


def test_pure_set_group():
    assert automorphism_group(pure_set(4)).order == 24


def test_linear_group():
    assert automorphism_group(linear_order(5)).order == 1


def test_circular_group():
    g = automorphism_group(circular_order(5))
    assert g.order == 5
    assert all(is_automorphism(circular_order(5), p) for p in g.generators)


def test_committed_orders():
    for name, order in read_table("aut_orders.tsv"):
        kind, m = name.rsplit("_", 1)
        s = {"pure": pure_set, "linear": linear_order, "circular": circular_order}[kind](int(m))
        assert automorphism_group(s).order == int(order), name


def test_invariance_examples():
    s = circular_order(5)
    g = automorphism_group(s)
    assert is_invariant(s, g, DefSet(2, {(a, a) for a in range(5)}))
    assert is_invariant(s, g, s.relation("K3"))
    p = pure_set(3)
    assert not is_invariant(p, automorphism_group(p), DefSet(1, {(0,)}))


def test_orbit_examples():
    p = pure_set(3)
    assert orbit_partition(p, automorphism_group(p), 2).class_count == 2
    lin = linear_order(3)
    assert orbit_partition(lin, automorphism_group(lin), 1).class_count == 3
    c = circular_order(5)
    part = orbit_partition(c, automorphism_group(c), 2)
    assert part.class_count == 5
    # diagonal, then one class per cyclic distance
    for a, b in product(range(5), repeat=2):
        assert part.class_of((a, b)) == (b - a) % 5


def test_class_ids_follow_first_tuple():
    c = circular_order(4)
    part = orbit_partition(c, automorphism_group(c), 3)
    firsts = [int(np.flatnonzero(part.labels == i)[0]) for i in range(part.class_count)]
    assert firsts == sorted(firsts)


def test_large_wreath_group_without_enumeration():
    from aritylab.algebra import composition
    s = composition(pure_set(4), pure_set(3), size_cap=16)
    assert automorphism_group(s).order == math.factorial(3) ** 4 * math.factorial(4)


def test_autgroup_rejects_non_permutation():
    with pytest.raises(ValueError):
        AutGroup(3, ((0, 0, 1),), 1)


def _generated(gens, m):
    ident = tuple(range(m))
    seen = {ident}
    todo = [ident]
    while todo:
        p = todo.pop()
        for g in gens:
            q = tuple(g[x] for x in p)
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


@given(structures(max_size=5, max_rels=3))
def test_group_matches_naive(s):
    g = automorphism_group(s)
    naive = set(naive_automorphisms(s))
    assert g.order == len(naive)
    assert all(p in naive for p in g.generators)
    assert _generated(g.generators, s.size) == naive
    assert math.factorial(s.size) % g.order == 0


@given(structures(max_size=4))
def test_named_relations_are_orbit_unions(s):
    g = automorphism_group(s)
    for (name, ar), rel in s.items():
        part = orbit_partition(s, g, ar)
        assert part.is_union_of_classes(DefSet(ar, rel).mask(s.size))


@given(structures(max_size=4), st.integers(1, 3))
def test_orbits_match_naive(s, k):
    part = orbit_partition(s, automorphism_group(s), k)
    assert sorted(map(sorted, (c.tuples for c in part.classes()))) == \
        sorted(map(sorted, naive_orbits(s, k)))


@given(structures(max_size=4), st.integers(1, 2), st.data())
def test_invariant_iff_union_of_orbits(s, k, data):
    g = automorphism_group(s)
    part = orbit_partition(s, g, k)
    cells = st.tuples(*[st.integers(0, s.size - 1)] * k)
    r = DefSet(k, data.draw(st.sets(cells, max_size=6)))
    assert is_invariant(s, g, r) == part.is_union_of_classes(r.mask(s.size))
    chosen = data.draw(st.sets(st.integers(0, part.class_count - 1)))
    union = DefSet(k, {t for c in chosen for t in part.classes()[c].tuples})
    assert is_invariant(s, g, union)


def test_trivial_group_orbits_are_singletons():
    lin = linear_order(4)
    g = automorphism_group(lin)
    for k in (1, 2, 3):
        assert orbit_partition(lin, g, k).class_count == 4**k
    assert orbit_partition(pure_set(5), automorphism_group(pure_set(5)), 1).class_count == 1


def test_unary_profiles_split_initial_cells():
    s = FinStructure(4, Signature((("P", 1),)), (frozenset({(0,), (2,)}),))
    g = automorphism_group(s)
    assert g.order == 4
    assert orbit_partition(s, g, 1).class_count == 2
