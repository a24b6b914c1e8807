"""Arity laws for disjoint unions and compositions, checked case by case.

The arity of a combined structure is computed with tuple length capped at
``k_cap`` (the full universe size is out of reach for compositions of size 16),
so a computed value below the predicted one is only conclusive when
``exact`` is set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from pathlib import Path

from .algebra import composition, disjoint_union
from .arity import structure_arity
from .core import FinStructure
from .dsl import dumps


@dataclass(frozen=True)
class LawCase:
    law: str
    left: str
    right: str
    ar_left: int
    ar_right: int
    predicted: int
    computed: int
    k_max: int
    exact: bool  # k_max reached the universe size

    @property
    def holds(self) -> bool:
        return self.predicted == self.computed

    @property
    def conclusive(self) -> bool:
        return self.holds or self.exact or self.computed > self.predicted


def union_prediction(a: int, b: int) -> int:
    return max(a, b)


def composition_prediction(a: int, b: int, m1: int, m2: int) -> int:
    return max(a, b) if min(m1, m2) == 1 else max(a, b, 2)


def _ar(s: FinStructure, cache: dict) -> int:
    if s.name not in cache:
        cache[s.name] = structure_arity(s).ar
    return cache[s.name]


def union_case(s1, s2, k_cap: int = 4, cache=None) -> tuple[LawCase, FinStructure]:
    cache = {} if cache is None else cache
    u = disjoint_union(s1, s2)
    k = min(u.size, k_cap)
    a, b = _ar(s1, cache), _ar(s2, cache)
    case = LawCase("union", s1.name, s2.name, a, b, union_prediction(a, b),
                   structure_arity(u, k).ar, k, k == u.size)
    return case, u


def composition_case(s1, s2, k_cap: int = 4, size_cap: int = 16,
                     cache=None) -> tuple[LawCase, FinStructure]:
    cache = {} if cache is None else cache
    c = composition(s1, s2, size_cap=size_cap)
    k = min(c.size, k_cap)
    a, b = _ar(s1, cache), _ar(s2, cache)
    case = LawCase("composition", s1.name, s2.name, a, b,
                   composition_prediction(a, b, s1.size, s2.size),
                   structure_arity(c, k).ar, k, k == c.size)
    return case, c


def sweep(law: str, structures, max_size: int | None = None, max_product: int | None = None,
          k_cap: int = 4, dump_dir=None, dump_limit: int = 25):
    """Run one law over all ordered pairs; optionally dump failing structures as DSL."""
    cache: dict = {}
    cases = []
    dumped = 0
    for s1, s2 in product(structures, repeat=2):
        if max_size is not None and max(s1.size, s2.size) > max_size:
            continue
        if max_product is not None and s1.size * s2.size > max_product:
            continue
        if law == "union":
            case, combined = union_case(s1, s2, k_cap, cache)
        else:
            case, combined = composition_case(s1, s2, k_cap, cache=cache)
        cases.append(case)
        if not case.holds and dump_dir is not None and dumped < dump_limit:
            path = Path(dump_dir)
            path.mkdir(parents=True, exist_ok=True)
            header = (f"# {law} law: predicted ar {case.predicted}, computed {case.computed}"
                      f" (k <= {case.k_max})\n")
            (path / f"{law}_{dumped:03d}.struct").write_text(header + dumps(combined))
            dumped += 1
    return cases
