"""Brute-force reference implementations.

Nothing here shares code with :mod:`aritylab.symmetry` or :mod:`aritylab.arity`:
automorphisms come from filtering all of S_m, orbits from applying every
group element, and n-arity from materialising every basic relation and
classifying tuples by their membership bit-vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from pathlib import Path

from .core import CapExceeded, DefSet, FinStructure

MAX_NAIVE_SIZE = 8
MAX_NAIVE_CELLS = 10**5


@lru_cache(maxsize=256)
def naive_automorphisms(s: FinStructure) -> tuple[tuple[int, ...], ...]:
    if s.size > MAX_NAIVE_SIZE:
        raise CapExceeded(f"naive automorphisms limited to m <= {MAX_NAIVE_SIZE}")
    out = []
    for p in permutations(range(s.size)):
        if all({tuple(p[x] for x in t) for t in rel} == rel for rel in s.relations):
            out.append(p)
    return tuple(out)


@lru_cache(maxsize=1024)
def naive_orbits(s: FinStructure, k: int) -> tuple[frozenset, ...]:
    """Orbits on k-tuples, listed by their smallest tuple (lexicographic)."""
    group = naive_automorphisms(s)
    seen = set()
    out = []
    for t in product(range(s.size), repeat=k):
        if t in seen:
            continue
        orb = frozenset(tuple(g[x] for x in t) for g in group)
        seen |= orb
        out.append(orb)
    return tuple(out)


def naive_invariant(s: FinStructure, r: DefSet) -> bool:
    return all(tuple(g[x] for x in t) in r.tuples
               for g in naive_automorphisms(s) for t in r.tuples)


@lru_cache(maxsize=1024)
def _classes(s: FinStructure, k: int, n: int, witnesses: tuple = ()) -> dict:
    """Map each k-tuple to its membership bit-vector over all basic relations.

    Witnesses (DefSets) contribute their pullbacks along every map from their
    positions into the k positions.
    """
    if s.size**k > MAX_NAIVE_CELLS:
        raise CapExceeded(f"{s.size}^{k} exceeds the oracle cap {MAX_NAIVE_CELLS}")
    tuples = list(product(range(s.size), repeat=k))
    basic: list[set] = []
    if n >= 1:
        orbits = naive_orbits(s, n)
        for mu in product(range(k), repeat=n):
            for orb in orbits:
                basic.append({t for t in tuples if tuple(t[i] for i in mu) in orb})
    if n == 1:
        for i in range(k):
            for j in range(k):
                basic.append({t for t in tuples if t[i] == t[j]})
    for w in witnesses:
        for mu in product(range(k), repeat=w.arity):
            basic.append({t for t in tuples if tuple(t[i] for i in mu) in w.tuples})
    vector = {}
    for t in tuples:
        bits = 0
        for b, rel in enumerate(basic):
            if t in rel:
                bits |= 1 << b
        vector[t] = bits
    return vector


def naive_is_n_ary(s: FinStructure, r: DefSet, n: int) -> bool:
    if not naive_invariant(s, r):
        raise ValueError("relation is not invariant; arity undefined")
    if r.arity == 0:
        return True
    vector = _classes(s, r.arity, n)
    verdict: dict[int, bool] = {}
    for t, bits in vector.items():
        inside = t in r.tuples
        if verdict.setdefault(bits, inside) != inside:
            return False
    return True


def naive_formula_arity(s: FinStructure, r: DefSet) -> int:
    for n in range(r.arity + 1):
        if naive_is_n_ary(s, r, n):
            return n
    raise AssertionError("unreachable")


def naive_is_almost_n_ary(s: FinStructure, n: int, witnesses, k_max: int) -> bool:
    """Every orbit of arity <= k_max is a union of witness-extended classes."""
    witnesses = tuple(witnesses)
    for w in witnesses:
        if not naive_invariant(s, w):
            raise ValueError("witness is not invariant")
    for k in range(1, k_max + 1):
        vector = _classes(s, k, n, witnesses)
        owner: dict[int, int] = {}
        for i, orb in enumerate(naive_orbits(s, k)):
            for t in orb:
                if owner.setdefault(vector[t], i) != i:
                    return False
    return True


def naive_structure_arity(s: FinStructure, k_max: int) -> int:
    """Largest formula arity over all orbit relations of arity <= k_max."""
    best = 0
    for k in range(1, k_max + 1):
        for orb in naive_orbits(s, k):
            best = max(best, naive_formula_arity(s, DefSet(k, orb)))
    return best


# -- fixture files: "<structure>\t<relation>\t<n>\t<true|false>" per line --

@dataclass(frozen=True)
class FixtureRecord:
    structure: str
    relation: str
    n: int
    verdict: bool

    def line(self) -> str:
        return f"{self.structure}\t{self.relation}\t{self.n}\t{str(self.verdict).lower()}"


def orbit_fixture_records(s: FinStructure, k_max: int, n_max: int) -> list[FixtureRecord]:
    out = []
    for k in range(1, k_max + 1):
        for i, orb in enumerate(naive_orbits(s, k)):
            r = DefSet(k, orb)
            for n in range(n_max + 1):
                out.append(FixtureRecord(s.name, f"O_{k}_{i}", n, naive_is_n_ary(s, r, n)))
    return out


def write_fixtures(path, records) -> None:
    lines = ["# structure\trelation\tn\tverdict"] + [r.line() for r in records]
    Path(path).write_text("\n".join(lines) + "\n")


def read_fixtures(path) -> list[FixtureRecord]:
    out = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sid, rel, n, verdict = line.split("\t")
        if verdict not in ("true", "false"):
            raise ValueError(f"bad verdict {verdict!r} in {raw!r}")
        out.append(FixtureRecord(sid, rel, int(n), verdict == "true"))
    return out
