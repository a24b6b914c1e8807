"""Seeded test corpus: every builder at each size plus random structures."""

from __future__ import annotations

import numpy as np

from .core import FinStructure, Signature, pure_set
from .factory import circular_order, linear_order, spherical_chain

DEFAULT_SEED = 20240611
SIZES = (2, 3, 4, 5)


def random_structure(m: int, rng: np.random.Generator, name: str,
                     p2: float = 0.35, p3: float = 0.2) -> FinStructure:
    """One binary relation R2 and one ternary relation R3 with given densities."""
    r2 = rng.random((m,) * 2) < p2
    r3 = rng.random((m,) * 3) < p3
    rels = (frozenset(map(tuple, np.argwhere(r2).tolist())),
            frozenset(map(tuple, np.argwhere(r3).tolist())))
    return FinStructure(m, Signature((("R2", 2), ("R3", 3))), rels, name=name)


def builders(m: int) -> list[FinStructure]:
    return [pure_set(m), linear_order(m), circular_order(m), spherical_chain(m, 4)]


def generate_corpus(seed: int = DEFAULT_SEED, sizes=SIZES, randoms: int = 5) -> list[FinStructure]:
    out = []
    for m in sizes:
        out.extend(builders(m))
        for i in range(randoms):
            rng = np.random.default_rng([seed, m, i])
            out.append(random_structure(m, rng, f"random_{m}_{i}"))
    return out
