"""Disjoint union and E-definable composition of finite structures.

Composition universes are encoded row-major: the pair ``(a, b)`` with
``a < m1`` and ``b < m2`` becomes the element ``a * m2 + b``.
"""

from __future__ import annotations

from itertools import product

from .core import (DEFAULT_SIZE_CAP, CapExceeded, DefSet, FinStructure, Signature,
                   StructureError)

PART_NAMES = ("P1", "P2")
EQUIV_NAME = "E"


def _rename(s1: FinStructure, s2: FinStructure, shared=()) -> tuple[dict, dict]:
    common = set(s1.signature.names) & set(s2.signature.names)
    n1 = {n: (f"{n}@1" if n in common and n not in shared else n) for n in s1.signature.names}
    n2 = {n: (f"{n}@2" if n in common and n not in shared else n) for n in s2.signature.names}
    return n1, n2


def disjoint_union(s1: FinStructure, s2: FinStructure,
                   size_cap: int = DEFAULT_SIZE_CAP) -> FinStructure:
    """Side-by-side union with part predicates P1, P2; s2 is shifted by m1."""
    m1, m2 = s1.size, s2.size
    n1, n2 = _rename(s1, s2)
    names = list(n1.values()) + list(n2.values())
    clash = set(PART_NAMES) & set(names)
    if clash:
        raise StructureError(f"part predicate names {sorted(clash)} already used")
    symbols, rels = [], []
    for (name, ar), rel in s1.items():
        symbols.append((n1[name], ar))
        rels.append(rel)
    for (name, ar), rel in s2.items():
        symbols.append((n2[name], ar))
        rels.append(frozenset(tuple(x + m1 for x in t) for t in rel))
    symbols += [("P1", 1), ("P2", 1)]
    rels += [frozenset((a,) for a in range(m1)),
             frozenset((a,) for a in range(m1, m1 + m2))]
    return FinStructure(m1 + m2, Signature(tuple(symbols)), tuple(rels),
                        name=f"({s1.name} + {s2.name})", size_cap=size_cap)


def composition(s1: FinStructure, s2: FinStructure, shared=(),
                size_cap: int = DEFAULT_SIZE_CAP, with_equivalence: bool = True) -> FinStructure:
    """The composition s1[s2], with the copy equivalence E named by default.

    Symbols listed in ``shared`` must occur in both signatures with the same
    arity and are interpreted disjunctively; any other common name is split
    into ``name@1`` / ``name@2``.
    """
    m1, m2 = s1.size, s2.size
    shared = set(shared)
    for name in shared:
        if name not in s1.signature or name not in s2.signature:
            raise StructureError(f"shared symbol {name} must occur in both structures")
        if s1.signature.arity(name) != s2.signature.arity(name):
            raise StructureError(f"shared symbol {name} has different arities")
    n1, n2 = _rename(s1, s2, shared)
    if with_equivalence and EQUIV_NAME in set(n1.values()) | set(n2.values()):
        raise StructureError(f"symbol name {EQUIV_NAME} is reserved for the copy equivalence")
    size = m1 * m2
    if size > size_cap:
        raise CapExceeded(f"composition size {size} exceeds size cap {size_cap}")

    def enc(a, b):
        return a * m2 + b

    def outer(rel, ar):
        return {tuple(enc(a, b) for a, b in zip(t, bs))
                for t in rel for bs in product(range(m2), repeat=ar)}

    def inner(rel):
        return {tuple(enc(a, b) for b in t) for a in range(m1) for t in rel}

    symbols, rels = [], []
    done = set()
    for (name, ar), rel in s1.items():
        tuples = outer(rel, ar)
        if name in shared:
            tuples |= inner(s2[name])
            done.add(name)
        symbols.append((n1[name], ar))
        rels.append(frozenset(tuples))
    for (name, ar), rel in s2.items():
        if name in done:
            continue
        symbols.append((n2[name], ar))
        rels.append(frozenset(inner(rel)))
    if with_equivalence:
        symbols.append((EQUIV_NAME, 2))
        rels.append(frozenset((enc(a, b), enc(a, c))
                              for a in range(m1) for b in range(m2) for c in range(m2)))
    return FinStructure(size, Signature(tuple(symbols)), tuple(rels),
                        name=f"{s1.name}[{s2.name}]", size_cap=size_cap)


def decode(x: int, m2: int) -> tuple[int, int]:
    return divmod(x, m2)


# -- witness transport --

def union_lift(w: DefSet, part: int, m1: int) -> DefSet:
    """Carry a witness of part ``part`` (1 or 2) into the union."""
    shift = 0 if part == 1 else m1
    return DefSet(w.arity, frozenset(tuple(x + shift for x in t) for t in w.tuples))


def union_restrict(w: DefSet, part: int, m1: int, m2: int) -> DefSet:
    """Trace of a union witness on one part, shifted back to that part."""
    lo, hi = (0, m1) if part == 1 else (m1, m1 + m2)
    return DefSet(w.arity, frozenset(tuple(x - lo for x in t) for t in w.tuples
                                     if all(lo <= x < hi for x in t)))


def composition_lift_outer(w: DefSet, m2: int) -> DefSet:
    """Witness of s1 read on first coordinates of s1[s2]."""
    return DefSet(w.arity, frozenset(tuple(a * m2 + b for a, b in zip(t, bs))
                                     for t in w.tuples
                                     for bs in product(range(m2), repeat=w.arity)))


def composition_lift_inner(w: DefSet, m1: int, m2: int) -> DefSet:
    """Witness of s2 read inside every copy of s2."""
    return DefSet(w.arity, frozenset(tuple(a * m2 + b for b in t)
                                     for a in range(m1) for t in w.tuples))


def composition_section_outer(w: DefSet, b0: int, m1: int, m2: int) -> DefSet:
    """{a : ((a1,b0),...,(ar,b0)) in w} on the first factor."""
    return DefSet(w.arity, frozenset(t for t in product(range(m1), repeat=w.arity)
                                     if tuple(a * m2 + b0 for a in t) in w.tuples))


def composition_section_inner(w: DefSet, a0: int, m2: int) -> DefSet:
    """{b : ((a0,b1),...,(a0,br)) in w} on the second factor."""
    return DefSet(w.arity, frozenset(t for t in product(range(m2), repeat=w.arity)
                                     if tuple(a0 * m2 + b for b in t) in w.tuples))
