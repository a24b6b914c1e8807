"""Signatures, finite relational structures and definable sets.

Universes are always ``0..m-1``.  Relations are stored as explicit frozensets
of tuples, which keeps everything hashable and immutable; the heavy lifting in
the other modules converts them to boolean masks over mixed-radix tuple
indices when needed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

DEFAULT_SIZE_CAP = 12
DEFAULT_WORK_CAP = 10**7

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_@]*$")


class StructureError(ValueError):
    """Malformed structure, relation or signature."""


class CapExceeded(RuntimeError):
    """A size or work cap would be exceeded."""


@dataclass(frozen=True)
class Signature:
    symbols: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.symbols]
        if len(set(names)) != len(names):
            raise StructureError(f"duplicate symbol names in {names}")
        for name, ar in self.symbols:
            if not _IDENT.match(name):
                raise StructureError(f"bad symbol name {name!r}")
            if ar < 1:
                raise StructureError(f"symbol {name} has arity {ar} < 1")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.symbols)

    def arity(self, name: str) -> int:
        for n, ar in self.symbols:
            if n == name:
                return ar
        raise KeyError(name)

    def __contains__(self, name) -> bool:
        return any(n == name for n, _ in self.symbols)


@dataclass(frozen=True)
class DefSet:
    """A set of k-tuples over some host universe (k may be 0)."""

    arity: int
    tuples: frozenset = frozenset()

    def __post_init__(self):
        if self.arity < 0:
            raise StructureError("negative arity")
        object.__setattr__(self, "tuples", frozenset(tuple(t) for t in self.tuples))
        for t in self.tuples:
            if len(t) != self.arity:
                raise StructureError(f"tuple {t} does not have length {self.arity}")

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(sorted(self.tuples))

    def __contains__(self, t):
        return tuple(t) in self.tuples

    @property
    def truth(self) -> bool:
        """Truth value of a 0-ary set (the sentence case)."""
        return () in self.tuples

    def check_range(self, size: int) -> None:
        for t in self.tuples:
            for x in t:
                if not (0 <= x < size):
                    raise StructureError(f"element {x} out of range for size {size}")

    def mask(self, size: int) -> np.ndarray:
        """Boolean mask over the mixed-radix index space of k-tuples."""
        out = np.zeros(size**self.arity, dtype=bool)
        if self.tuples:
            out[[tuple_index(t, size) for t in self.tuples]] = True
        return out

    @classmethod
    def from_mask(cls, mask: np.ndarray, size: int, arity: int) -> DefSet:
        idx = np.flatnonzero(mask)
        return cls(arity, frozenset(index_tuple(int(i), size, arity) for i in idx))

    @classmethod
    def full(cls, size: int, arity: int) -> DefSet:
        return cls.from_mask(np.ones(size**arity, dtype=bool), size, arity)


def tuple_index(t, size: int) -> int:
    i = 0
    for x in t:
        i = i * size + x
    return i


def index_tuple(i: int, size: int, arity: int) -> tuple[int, ...]:
    out = [0] * arity
    for j in range(arity - 1, -1, -1):
        i, out[j] = divmod(i, size)
    return tuple(out)


def tuple_coords(size: int, k: int, work_cap: int = DEFAULT_WORK_CAP) -> np.ndarray:
    """Array of shape (size**k, k) listing all k-tuples in index order."""
    n = size**k
    if n * max(k, 1) > work_cap:
        raise CapExceeded(f"{size}^{k} tuple space exceeds work cap {work_cap}")
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((size,) * k, dtype=np.int64)
    return grids.reshape(k, -1).T.copy()


@dataclass(frozen=True)
class FinStructure:
    """A finite relational structure on ``0..size-1``.

    The constructor only normalises; call :func:`validate_structure` (or build
    through :func:`structure`) to check the invariants.
    """

    size: int
    signature: Signature
    relations: tuple[frozenset, ...]
    name: str = field(default="", compare=False)
    size_cap: int = field(default=DEFAULT_SIZE_CAP, compare=False, repr=False)

    def __post_init__(self):
        if self.size < 1:
            raise StructureError("universe must be nonempty")
        if self.size > self.size_cap:
            raise CapExceeded(f"size {self.size} exceeds size cap {self.size_cap}")
        rels = tuple(frozenset(tuple(t) for t in r) for r in self.relations)
        if len(rels) != len(self.signature.symbols):
            raise StructureError("one interpretation per symbol required")
        object.__setattr__(self, "relations", rels)

    def __getitem__(self, name: str) -> frozenset:
        return self.relations[self.signature.names.index(name)]

    def relation(self, name: str) -> DefSet:
        return DefSet(self.signature.arity(name), self[name])

    def items(self):
        return zip(self.signature.symbols, self.relations)

    def renamed(self, name: str) -> FinStructure:
        return FinStructure(self.size, self.signature, self.relations, name=name,
                            size_cap=self.size_cap)


def structure(size: int, rels: Mapping[str, tuple[int, Iterable]] | None = None,
              name: str = "", size_cap: int = DEFAULT_SIZE_CAP) -> FinStructure:
    """Build and validate a structure from ``{name: (arity, tuples)}``."""
    rels = rels or {}
    sig = Signature(tuple((n, ar) for n, (ar, _) in rels.items()))
    s = FinStructure(size, sig, tuple(frozenset(ts) for _, ts in rels.values()),
                     name=name, size_cap=size_cap)
    verdict = validate_structure(s)
    if not verdict.ok:
        raise StructureError("; ".join(verdict.violations))
    return s


def pure_set(size: int) -> FinStructure:
    return FinStructure(size, Signature(), (), name=f"pure_{size}")


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violations: tuple[str, ...] = ()


def validate_structure(s: FinStructure) -> Verdict:
    problems = []
    for (name, ar), rel in s.items():
        for t in sorted(rel):
            if len(t) != ar:
                problems.append(f"{name}{t}: arity mismatch (expected {ar}, got {len(t)})")
                continue
            for x in t:
                if not isinstance(x, (int, np.integer)) or x < 0:
                    problems.append(f"{name}{t}: bad element {x!r}")
                elif x >= s.size:
                    problems.append(f"{name}{t}: element {x} ≥ size {s.size}")
    return Verdict(not problems, tuple(problems))


def expand_with(s: FinStructure, name: str, r: DefSet) -> FinStructure:
    if name in s.signature:
        raise StructureError(f"symbol {name} already in signature")
    if r.arity < 1:
        raise StructureError("expansion needs a relation of arity >= 1")
    r.check_range(s.size)
    sig = Signature(s.signature.symbols + ((name, r.arity),))
    return FinStructure(s.size, sig, s.relations + (r.tuples,), name=s.name,
                        size_cap=s.size_cap)


def restrict_signature(s: FinStructure, keep: Iterable[str]) -> FinStructure:
    keep = set(keep)
    unknown = keep - set(s.signature.names)
    if unknown:
        raise StructureError(f"unknown symbols {sorted(unknown)}")
    pairs = [(sym, rel) for sym, rel in s.items() if sym[0] in keep]
    sig = Signature(tuple(sym for sym, _ in pairs))
    return FinStructure(s.size, sig, tuple(rel for _, rel in pairs), name=s.name,
                        size_cap=s.size_cap)
