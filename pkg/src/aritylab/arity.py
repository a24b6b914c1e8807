"""Arity, almost arity and witness degrees via subtype partitions.

At finite scale a relation is 0-definable iff it is invariant under the
automorphism group, i.e. a union of orbits.  A k-tuple's *n-subtype* records
the orbits of its n-position subtuples (plus the equality pattern when
n = 1, plus memberships of substituted witness relations).  An invariant
relation is n-ary iff it is a union of n-subtype classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .core import (DEFAULT_WORK_CAP, CapExceeded, DefSet, FinStructure,
                   expand_with, tuple_coords)
from .symmetry import (AutGroup, TuplePartition, automorphism_group,
                       is_invariant, make_partition, orbit_partition)


class NotInvariantError(ValueError):
    """Relation is not invariant, hence not 0-definable: arity undefined."""


@dataclass(frozen=True)
class SubtypeContext:
    k: int
    n: int
    witnesses: tuple[tuple[str, DefSet], ...] = ()


@dataclass(frozen=True)
class DegreePair:
    m: int
    r: int

    def admissible(self, n: int) -> bool:
        return (self.m, self.r) == (0, 0) or (self.m >= 1 and self.r > n)


@dataclass
class ArityReport:
    structure: str
    ar: int
    k_max: int
    relations: list[tuple[str, int]]
    levels: list[tuple[int, int]]
    almost: dict | None = None
    oracle_checked: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "structure": self.structure,
            "ar": self.ar,
            "k_max": self.k_max,
            "relations": [{"name": n, "formula_arity": a} for n, a in self.relations],
            "levels": [{"k": k, "least_n": n} for k, n in self.levels],
            "almost": self.almost,
            "oracle_checked": self.oracle_checked,
            "notes": list(self.notes),
        }


def _weights(m, k):
    return m ** np.arange(k - 1, -1, -1, dtype=np.int64)


class _Packer:
    """Accumulates small-cardinality columns into one mixed-radix int64 key.

    Keys are compressed with ``np.unique`` only when the radix would overflow,
    so thousands of binary pullback columns cost a handful of sorts.
    """

    LIMIT = 2**62

    def __init__(self, n: int):
        self.key = np.zeros(n, dtype=np.int64)
        self.card = 1

    def _compress(self):
        _, inv = np.unique(self.key, return_inverse=True)
        self.key = inv.ravel().astype(np.int64)
        self.card = int(self.key.max()) + 1 if len(self.key) else 1

    def add(self, col: np.ndarray, card: int) -> None:
        if self.card * card >= self.LIMIT:
            self._compress()
        self.key = self.key * card + col
        self.card *= card

    def labels(self) -> np.ndarray:
        self._compress()
        return self.key


def _check_witnesses(s, group, witnesses):
    for name, w in witnesses:
        if w.arity < 1:
            raise ValueError(f"witness {name} must have arity >= 1")
        if not is_invariant(s, group, w):
            raise NotInvariantError(f"witness {name} is not invariant")


def subtype_partition(s: FinStructure, group: AutGroup, ctx: SubtypeContext,
                      work_cap: int = DEFAULT_WORK_CAP) -> TuplePartition:
    _check_witnesses(s, group, ctx.witnesses)
    return _subtype(s, group, ctx.k, ctx.n, tuple(w for _, w in ctx.witnesses), work_cap)


@lru_cache(maxsize=256)
def _subtype(s, group, k, n, witnesses, work_cap):
    m = s.size
    n = min(n, k)
    if n == k and n >= 1:
        # every witness is invariant, so the identity map already decides it
        return orbit_partition(s, group, k, work_cap)
    coords = tuple_coords(m, k, work_cap)
    packer = _Packer(len(coords))
    if n >= 1:
        orb = orbit_partition(s, group, n, work_cap)
        w = _weights(m, n)
        # For k >= n, subtuples along non-injective or unsorted maps have orbits
        # determined by those along sorted injective maps.
        for mu in combinations(range(k), n):
            packer.add(orb.labels[coords[:, mu] @ w], orb.class_count)
    if n == 1:
        for i, j in combinations(range(k), 2):
            packer.add((coords[:, i] == coords[:, j]).astype(np.int64), 2)
    for wit in witnesses:
        mask = wit.mask(m)
        w = _weights(m, wit.arity)
        for mu in product(range(k), repeat=wit.arity):
            packer.add(mask[coords[:, list(mu)] @ w].astype(np.int64), 2)
    return make_partition(m, k, packer.labels())


def _require_invariant(s, group, r: DefSet):
    if not is_invariant(s, group, r):
        raise NotInvariantError("relation is not invariant (not 0-definable); arity undefined")


def is_n_ary(s: FinStructure, group: AutGroup, r: DefSet, n: int,
             work_cap: int = DEFAULT_WORK_CAP) -> bool:
    r.check_range(s.size)
    _require_invariant(s, group, r)
    if r.arity == 0:
        return True
    part = _subtype(s, group, r.arity, n, (), work_cap)
    return part.is_union_of_classes(r.mask(s.size))


def formula_arity(s: FinStructure, group: AutGroup, r: DefSet,
                  work_cap: int = DEFAULT_WORK_CAP) -> int:
    r.check_range(s.size)
    _require_invariant(s, group, r)
    for n in range(r.arity + 1):
        if is_n_ary(s, group, r, n, work_cap):
            return n
    raise AssertionError("unreachable: every invariant relation is k-ary")


def _level_arity(s, group, k, work_cap, witnesses=()) -> int:
    orbits = orbit_partition(s, group, k, work_cap).class_count
    for n in range(k + 1):
        if _subtype(s, group, k, n, witnesses, work_cap).class_count == orbits:
            return n
    return k


def default_k_max(s: FinStructure, k_max: int | None) -> int:
    return s.size if k_max is None else k_max


def structure_arity(s: FinStructure, k_max: int | None = None,
                    work_cap: int = DEFAULT_WORK_CAP) -> ArityReport:
    """Least n making n-subtypes coincide with orbits for every k <= k_max.

    k_max defaults to the universe size: longer tuples repeat an entry and
    contract to shorter ones plus equality atoms.
    """
    k_max = default_k_max(s, k_max)
    if s.size**k_max > work_cap:
        raise CapExceeded(f"{s.size}^{k_max} exceeds work cap {work_cap}; pass a smaller k_max")
    group = automorphism_group(s)
    levels = [(k, _level_arity(s, group, k, work_cap)) for k in range(1, k_max + 1)]
    ar = max((n for _, n in levels), default=0)
    rels = [(name, formula_arity(s, group, s.relation(name), work_cap))
            for name in s.signature.names]
    notes = []
    if k_max < s.size:
        notes.append(f"k_max={k_max} < size {s.size}: ar is exact only for tuples of length <= k_max")
    return ArityReport(s.name, ar, k_max, rels, levels, notes=notes)


def is_almost_n_ary(s: FinStructure, group: AutGroup, n: int, witnesses=(),
                    k_max: int | None = None, work_cap: int = DEFAULT_WORK_CAP) -> bool:
    witnesses = _as_named(witnesses)
    _check_witnesses(s, group, witnesses)
    ws = tuple(w for _, w in witnesses)
    k_max = default_k_max(s, k_max)
    for k in range(1, k_max + 1):
        orbits = orbit_partition(s, group, k, work_cap).class_count
        if _subtype(s, group, k, n, ws, work_cap).class_count != orbits:
            return False
    return True


def _as_named(witnesses):
    out = []
    for i, w in enumerate(witnesses):
        if isinstance(w, DefSet):
            out.append((f"W{i}", w))
        else:
            out.append((w[0], w[1]))
    return tuple(out)


def orbit_relations(s: FinStructure, group: AutGroup, k: int,
                    work_cap: int = DEFAULT_WORK_CAP) -> list[tuple[str, DefSet]]:
    """Orbit relations of arity k, named ``O_k_i`` by class id."""
    part = orbit_partition(s, group, k, work_cap)
    return [(f"O_{k}_{i}", c) for i, c in enumerate(part.classes())]


@dataclass(frozen=True)
class DegreeResult:
    degree: DegreePair
    witnesses: tuple[str, ...]
    optimal: bool
    n: int
    rank: str = "m, then r"


def witness_degree_search(s: FinStructure, group: AutGroup, n: int, budget: int = 5000,
                          r_max: int | None = None, k_max: int | None = None,
                          work_cap: int = DEFAULT_WORK_CAP,
                          exhaustive_limit: int = 20) -> DegreeResult:
    """Smallest witness set (by witness count, then max arity) for almost n-arity.

    Candidates are single orbit relations of arity n < r <= r_max.  Subsets are
    enumerated exhaustively while the pool has at most ``exhaustive_limit``
    members and the budget of checks lasts; otherwise witnesses are picked
    greedily, level by level, and the result is flagged non-optimal.
    """
    if n < 1:
        raise ValueError("witness_degree_search needs n >= 1")
    k_max = default_k_max(s, k_max)
    r_max = k_max if r_max is None else r_max
    if is_almost_n_ary(s, group, n, (), k_max, work_cap):
        return DegreeResult(DegreePair(0, 0), (), True, n)
    def ok(ws):
        return is_almost_n_ary(s, group, n, ws, k_max, work_cap)

    spent = 0
    pool_size = sum(orbit_partition(s, group, r, work_cap).class_count
                    for r in range(n + 1, r_max + 1))
    if pool_size <= exhaustive_limit:
        pool = [(name, w) for r in range(n + 1, r_max + 1)
                for name, w in orbit_relations(s, group, r, work_cap)]
        exhausted = False
        for size in range(1, len(pool) + 1):
            for r in range(n + 1, r_max + 1):
                sub = [p for p in pool if p[1].arity <= r]
                for combo in combinations(sub, size):
                    if max(w.arity for _, w in combo) != r:
                        continue
                    spent += 1
                    if spent > budget:
                        exhausted = True
                        break
                    if ok(combo):
                        return DegreeResult(DegreePair(size, r), tuple(nm for nm, _ in combo), True, n)
                if exhausted:
                    break
            if exhausted:
                break

    # greedy: at the shortest tuple length where some orbit is still not a
    # union of subtype classes, add the failing orbit that splits the most classes
    chosen: list[tuple[str, DefSet]] = []
    while True:
        ws = tuple(w for _, w in chosen)
        level = next((k for k in range(1, k_max + 1)
                      if _subtype(s, group, k, n, ws, work_cap).class_count
                      != orbit_partition(s, group, k, work_cap).class_count), None)
        if level is None:
            break
        if level > r_max:
            raise RuntimeError(f"no candidate of arity <= r_max={r_max} can separate "
                               f"orbits of length {level}")
        part = _subtype(s, group, level, n, ws, work_cap)
        failing = [(name, w) for name, w in orbit_relations(s, group, level, work_cap)
                   if not part.is_union_of_classes(w.mask(s.size))]
        best = max(failing, key=lambda c: _subtype(s, group, level, n, ws + (c[1],),
                                                   work_cap).class_count)
        chosen.append(best)
    deg = DegreePair(len(chosen), max(w.arity for _, w in chosen))
    return DegreeResult(deg, tuple(nm for nm, _ in chosen), False, n)


def orbit_code_witnesses(s: FinStructure, group: AutGroup, r: int | None = None,
                         work_cap: int = DEFAULT_WORK_CAP) -> list[tuple[str, DefSet]]:
    """Witnesses ``C_r_b``: tuples of arity r whose orbit id has bit b set.

    With r = m (the default) these make any finite structure almost unary:
    a k-tuple with k <= m is the pullback of an m-tuple along a surjection,
    and the bits recover that m-tuple's orbit.
    """
    r = s.size if r is None else r
    part = orbit_partition(s, group, r, work_cap)
    bits = max(1, int(part.class_count - 1).bit_length())
    out = []
    for b in range(bits):
        mask = ((part.labels >> b) & 1).astype(bool)
        out.append((f"C_{r}_{b}", DefSet.from_mask(mask, s.size, r)))
    return out


def aritizing_expansion(s: FinStructure, n: int, work_cap: int = DEFAULT_WORK_CAP) -> FinStructure:
    """Expand s by one relation ``O_k_i`` per orbit of arity k <= n."""
    if n < 1:
        raise ValueError("aritizing_expansion needs n >= 1")
    group = automorphism_group(s)
    out = s
    for k in range(1, n + 1):
        for name, rel in orbit_relations(s, group, k, work_cap):
            out = expand_with(out, name, rel)
    if automorphism_group(out).order != group.order:
        raise AssertionError("orbit relations changed the automorphism group")
    return out
