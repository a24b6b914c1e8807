"""Automorphism groups and orbit partitions of tuple spaces.

Groups are kept as generating sets.  Generators come from an individualise-
and-refine search: the leftmost path of the search tree fixes a base
``v1, v2, ...`` and for every base point we look for automorphisms moving it
to each candidate of its cell that is not already reached.  The generators
found at levels ``>= i`` generate the pointwise stabiliser of
``v1..v(i-1)``, so the group order is the product of the basic orbit lengths.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .core import DEFAULT_WORK_CAP, DefSet, FinStructure, tuple_coords

Permutation = tuple  # images of 0..m-1


@dataclass(frozen=True)
class AutGroup:
    degree: int
    generators: tuple[Permutation, ...]
    order: int
    base: tuple[int, ...] = ()

    def __post_init__(self):
        for g in self.generators:
            if sorted(g) != list(range(self.degree)):
                raise ValueError(f"{g} is not a permutation of 0..{self.degree - 1}")


@dataclass(frozen=True, eq=False)
class TuplePartition:
    """A partition of the k-tuple space, class ids numbered by first tuple."""

    size: int
    arity: int
    labels: np.ndarray
    class_count: int

    def class_of(self, t) -> int:
        i = 0
        for x in t:
            i = i * self.size + x
        return int(self.labels[i])

    def classes(self) -> list[DefSet]:
        return [DefSet.from_mask(self.labels == c, self.size, self.arity)
                for c in range(self.class_count)]

    def __eq__(self, other):
        if not isinstance(other, TuplePartition):
            return NotImplemented
        return (self.size, self.arity) == (other.size, other.arity) and \
            np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash((self.size, self.arity, self.labels.tobytes()))

    def refines(self, other: TuplePartition) -> bool:
        """True when every class of self lies inside one class of other."""
        pairs = np.unique(self.labels.astype(np.int64) * other.class_count + other.labels)
        return len(pairs) == self.class_count

    def is_union_of_classes(self, mask: np.ndarray) -> bool:
        inside = np.zeros(self.class_count, dtype=bool)
        inside[self.labels[mask]] = True
        return bool(np.array_equal(inside[self.labels], mask))


def canonical_labels(labels: np.ndarray) -> tuple[np.ndarray, int]:
    """Renumber class ids so classes appear in order of their smallest index."""
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv.ravel()], len(first)


def make_partition(size: int, arity: int, labels: np.ndarray) -> TuplePartition:
    lab, count = canonical_labels(labels)
    return TuplePartition(size, arity, lab, count)


# -- individualise/refine search --

class _Refiner:
    """Colour refinement on an ordered partition, stored as a colour array.

    Colours are cell positions.  A refinement round counts, for every element,
    the tuples it occurs in keyed by (relation, position, equality pattern,
    colours of the whole tuple).  Elements are re-ranked by (old colour,
    sorted key counts), so the new order depends only on isomorphism-invariant
    data.
    """

    def __init__(self, s: FinStructure):
        self.m = s.size
        self.rels = []
        for rel in s.relations:
            if not rel:
                continue
            arr = np.array(sorted(rel), dtype=np.int64)
            r = arr.shape[1]
            pat = np.zeros(len(arr), dtype=np.int64)
            for i in range(r):
                for j in range(i + 1, r):
                    pat = pat * 2 + (arr[:, i] == arr[:, j])
            w = self.m ** np.arange(r - 1, -1, -1, dtype=np.int64)
            self.rels.append((arr, pat, np.sort(arr @ w)))

    def refine(self, colors: np.ndarray) -> np.ndarray:
        m = self.m
        colors, ncol = _dense(colors)
        while True:
            keys, owners = [], []
            for ri, (arr, pat, _) in enumerate(self.rels):
                r = arr.shape[1]
                code = pat.copy()
                for q in range(r):
                    code = code * m + colors[arr[:, q]]
                for p in range(r):
                    keys.append((code * len(self.rels) + ri) * r + p)
                    owners.append(arr[:, p])
            if not keys:
                return colors
            keys = np.concatenate(keys)
            owners = np.concatenate(owners)
            span = int(keys.max()) + 1
            uniq, counts = np.unique(owners * span + keys, return_counts=True)
            own = uniq // span
            bounds = np.searchsorted(own, np.arange(m + 1)).tolist()
            feat, counts = (uniq % span).tolist(), counts.tolist()
            sig = [(int(colors[x]), feat[bounds[x]:bounds[x + 1]], counts[bounds[x]:bounds[x + 1]])
                   for x in range(m)]
            rank = {key: i for i, key in enumerate(sorted({(c, tuple(f), tuple(n)) for c, f, n in sig}))}
            new = np.array([rank[(c, tuple(f), tuple(n))] for c, f, n in sig], dtype=np.int64)
            nnew = len(rank)
            if nnew == ncol:
                return new
            colors, ncol = new, nnew

    def individualize(self, colors: np.ndarray, v: int) -> np.ndarray:
        split = 2 * colors + 1
        split[v] -= 1
        return self.refine(split)

    def is_automorphism(self, g) -> bool:
        g = np.asarray(g)
        for arr, _, idx in self.rels:
            w = self.m ** np.arange(arr.shape[1] - 1, -1, -1, dtype=np.int64)
            if not np.array_equal(np.sort(g[arr] @ w), idx):
                return False
        return True


def _dense(colors):
    _, inv = np.unique(colors, return_inverse=True)
    inv = inv.ravel()
    return inv, int(inv.max()) + 1


def _cells(colors) -> list[list[int]]:
    out = [[] for _ in range(int(colors.max()) + 1)]
    for x, c in enumerate(colors.tolist()):
        out[c].append(x)
    return out


def _target_cell(cells) -> int | None:
    best = None
    for i, c in enumerate(cells):
        if len(c) > 1 and (best is None or len(c) < len(cells[best])):
            best = i
    return best


def _orbit(point, gens):
    seen = {point}
    todo = [point]
    while todo:
        x = todo.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


@lru_cache(maxsize=1024)
def automorphism_group(s: FinStructure) -> AutGroup:
    rf = _Refiner(s)
    m = s.size
    # leftmost path of the search tree
    path = [rf.refine(np.zeros(m, dtype=np.int64))]
    base, targets = [], []
    while (ci := _target_cell(cells := _cells(path[-1]))) is not None:
        v = min(cells[ci])
        base.append(v)
        targets.append(ci)
        path.append(rf.individualize(path[-1], v))
    leaf = np.argsort(path[-1])
    shapes = [np.bincount(p).tolist() for p in path]

    def find(colors, depth, want):
        """Search below ``colors`` for an automorphism mapping base[:len(want)] to want."""
        if np.bincount(colors).tolist() != shapes[depth]:
            return None
        if depth == len(base):
            g = [0] * m
            for a, b in zip(leaf.tolist(), np.argsort(colors).tolist()):
                g[a] = b
            g = tuple(g)
            if any(g[b] != w for b, w in zip(base, want)):
                return None
            return g if rf.is_automorphism(g) else None
        for w in np.flatnonzero(colors == targets[depth]).tolist():
            g = find(rf.individualize(colors, w), depth + 1, want)
            if g is not None:
                return g
        return None

    level_gens: list[list[Permutation]] = [[] for _ in base]
    order = 1
    for i in range(len(base) - 1, -1, -1):
        v, ci = base[i], targets[i]
        deeper = [g for lv in level_gens[i:] for g in lv]
        orbit = _orbit(v, deeper)
        for w in np.flatnonzero(path[i] == ci).tolist():
            if w in orbit:
                continue
            g = find(rf.individualize(path[i], w), i + 1, tuple(base[:i]) + (w,))
            if g is not None:
                level_gens[i].append(g)
                deeper.append(g)
                orbit = _orbit(v, deeper)
        order *= len(orbit)
    gens = tuple(g for lv in level_gens for g in lv)
    return AutGroup(m, gens, order, tuple(base))


def is_automorphism(s: FinStructure, g) -> bool:
    return _Refiner(s).is_automorphism(tuple(g))


def apply_to_tuple(g, t) -> tuple:
    return tuple(g[x] for x in t)


def is_invariant(s: FinStructure, group: AutGroup, r: DefSet) -> bool:
    r.check_range(s.size)
    if r.arity == 0 or not r.tuples:
        return True
    arr = np.array(sorted(r.tuples), dtype=np.int64)
    w = s.size ** np.arange(r.arity - 1, -1, -1, dtype=np.int64)
    idx = arr @ w
    for g in group.generators:
        img = np.asarray(g)[arr] @ w
        if not np.array_equal(np.sort(img), idx):
            return False
    return True


def is_invariant_mask(group: AutGroup, mask: np.ndarray, k: int,
                      work_cap: int = DEFAULT_WORK_CAP) -> bool:
    m = group.degree
    if not group.generators:
        return True
    coords = tuple_coords(m, k, work_cap)
    for g in group.generators:
        if not np.array_equal(mask[_image_index(np.asarray(g), coords, m)], mask):
            return False
    return True


def _image_index(g: np.ndarray, coords: np.ndarray, m: int) -> np.ndarray:
    k = coords.shape[1]
    weights = m ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return g[coords] @ weights if k else np.zeros(1, dtype=np.int64)


def orbit_partition(s: FinStructure, group: AutGroup, k: int,
                    work_cap: int = DEFAULT_WORK_CAP) -> TuplePartition:
    return _orbit_partition(group, s.size, k, work_cap)


@lru_cache(maxsize=256)
def _orbit_partition(group: AutGroup, m: int, k: int, work_cap: int) -> TuplePartition:
    coords = tuple_coords(m, k, work_cap)
    n = coords.shape[0]
    if not group.generators:
        return TuplePartition(m, k, np.arange(n, dtype=np.int64), n)
    src = np.tile(np.arange(n, dtype=np.int64), len(group.generators))
    dst = np.concatenate([_image_index(np.asarray(g), coords, m) for g in group.generators])
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return make_partition(m, k, labels)
