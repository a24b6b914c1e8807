"""Order structures and their axiom checks.

Axioms are generated as :class:`~aritylab.formula.Formula` values and decided
with :func:`~aritylab.formula.evaluate`; nothing here hand-codes their
semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import DefSet, FinStructure, Signature, StructureError
from .formula import (And, Atom, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or,
                      conj, disj, evaluate_array, forall_all, pairwise_distinct,
                      to_text)

VARIANTS = ("literal", "allwindows")


def linear_order(m: int) -> FinStructure:
    if m < 1:
        raise StructureError("linear_order needs m >= 1")
    k2 = frozenset((a, b) for a in range(m) for b in range(m) if a < b)
    return FinStructure(m, Signature((("K2", 2),)), (k2,), name=f"linear_{m}")


def _cyclic(a, b, c) -> bool:
    return a < b < c or b < c < a or c < a < b


def circular_order(m: int) -> FinStructure:
    """Circular order on 0..m-1; triples with a repeated entry are all included."""
    if m < 1:
        raise StructureError("circular_order needs m >= 1")
    k3 = frozenset(t for t in product(range(m), repeat=3)
                   if len(set(t)) < 3 or _cyclic(*t))
    return FinStructure(m, Signature((("K3", 3),)), (k3,), name=f"circular_{m}")


def _windows(t, j):
    n = len(t)
    return [tuple(t[(i + d) % n] for d in range(j)) for i in range(n)]


def spherical_chain(m: int, n: int, variant: str = "literal") -> FinStructure:
    """Iterate the window chain rule from the strict linear order up to K_n.

    ``literal``: K_{j+1}(a) iff (W1 & W2) | (W2 & W3) | (W3 & W4), where Wi is
    K_j on the i-th cyclic window of length j (indices mod j+1).
    ``allwindows``: every cyclic window is K_j-positive.
    """
    if m < 1 or n < 2:
        raise StructureError("spherical_chain needs m >= 1 and n >= 2")
    if variant not in VARIANTS:
        raise StructureError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    rel = set(linear_order(m)["K2"])
    for j in range(2, n):
        nxt = set()
        for t in product(range(m), repeat=j + 1):
            w = [x in rel for x in _windows(t, j)]
            w.append(w[0])  # W4 wraps to W1 when j + 1 == 3
            if variant == "literal":
                ok = (w[0] and w[1]) or (w[1] and w[2]) or (w[2] and w[3])
            else:
                ok = all(w[:j + 1])
            if ok:
                nxt.add(t)
        rel = nxt
    return FinStructure(m, Signature(((f"K{n}", n),)), (frozenset(rel),),
                        name=f"spherical_{m}_{n}" + ("" if variant == "literal" else "_all"))


# -- axioms --

def _xs(n):
    return [f"x{i}" for i in range(1, n + 1)]


def _swap(vs, i):
    vs = list(vs)
    vs[i], vs[i + 1] = vs[i + 1], vs[i]
    return vs


def co_axioms(name: str = "K3") -> dict[str, tuple[list[str], Formula]]:
    """Matrices of co1..co4 with their universally quantified variables."""
    K = lambda *a: Atom(name, a)  # noqa: E731
    x, y, z = "x", "y", "z"
    return {
        "co1": ([x, y, z], Implies(K(x, y, z), K(y, z, x))),
        "co2": ([x, y, z], Iff(And(K(x, y, z), K(y, x, z)),
                               disj([Eq(x, y), Eq(y, z), Eq(z, x)]))),
        "co3": ([x, y, z], Implies(K(x, y, z), _forall_t(Or(K(x, y, "t"), K("t", y, z)), [x, y, z]))),
        "co4": ([x, y, z], Or(K(x, y, z), K(y, x, z))),
    }


def nbo_axioms(n: int, name: str | None = None) -> dict[str, tuple[list[str], Formula]]:
    """Matrices of nbo1..nbo4; the implicit index i is read as a conjunction over i < n."""
    name = name or f"K{n}"
    xs = _xs(n)
    K = lambda vs: Atom(name, tuple(vs))  # noqa: E731
    adjacent_eq = disj(Eq(xs[i], xs[i + 1]) for i in range(n - 1))
    return {
        "nbo1": (xs, Implies(K(xs), K(xs[1:] + xs[:1]))),
        "nbo2": (xs, conj(Iff(And(K(xs), K(_swap(xs, i))), adjacent_eq) for i in range(n - 1))),
        "nbo3": (xs, Implies(K(xs), _forall_t(Or(K(xs[:-1] + ["t"]), K(["t"] + xs[1:])), xs))),
        "nbo4": (xs, conj(Or(K(xs), K(_swap(xs, i))) for i in range(n - 1))),
    }


# in the distinct-tuple reading the inner t must also avoid the outer variables
def _forall_t(body, outer, distinct=False):
    if distinct:
        body = Implies(conj(Not(Eq("t", v)) for v in outer), body)
    return Forall("t", body)


def _distinct_version(matrix: Formula, vs) -> Formula:
    def fix(f):
        if isinstance(f, Forall) and f.var == "t":
            return _forall_t(f.body, vs, distinct=True)
        if isinstance(f, (And, Or, Implies, Iff)):
            return type(f)(fix(f.left), fix(f.right))
        if isinstance(f, Not):
            return Not(fix(f.body))
        return f

    guard = pairwise_distinct(vs)
    body = fix(matrix)
    return Implies(guard, body) if guard is not None else body


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    distinct_only: bool
    holds: bool
    counterexample: tuple[int, ...] | None
    sentence: str


def _decide(s, label, vs, matrix, distinct_only) -> AxiomVerdict:
    f = _distinct_version(matrix, vs) if distinct_only else matrix
    arr = evaluate_array(s, f, vs).ravel()
    bad = None
    if not arr.all():
        bad = min(DefSet.from_mask(~arr, s.size, len(vs)).tuples)
    return AxiomVerdict(label, distinct_only, bad is None, bad,
                        to_text(forall_all(vs, f)))


def check_axioms(s: FinStructure, name: str, n: int | None = None) -> list[AxiomVerdict]:
    """Per-axiom verdicts (all tuples, then pairwise-distinct tuples)."""
    if name not in s.signature:
        raise StructureError(f"unknown relation {name}")
    ar = s.signature.arity(name)
    n = ar if n is None else n
    if ar != n:
        raise StructureError(f"arity mismatch: {name} has arity {ar}, axioms need {n}")
    if n == 3:
        axioms = co_axioms(name)
    elif n >= 4:
        axioms = nbo_axioms(n, name)
    else:
        raise StructureError("axioms exist for n = 3 (co) and n >= 4 (nbo)")
    out = []
    for distinct in (False, True):
        for label, (vs, matrix) in axioms.items():
            out.append(_decide(s, label, vs, matrix, distinct))
    return out


def density_sentence(name: str, n: int) -> tuple[list[str], Formula]:
    """Matrix of the density axiom: distinct positive tuples admit a new second point."""
    xs = _xs(n)
    y = "y"
    guard = pairwise_distinct(xs)
    antecedent = Atom(name, tuple(xs)) if guard is None else And(Atom(name, tuple(xs)), guard)
    fresh = conj(Not(Eq(x, y)) for x in xs)
    moved = Atom(name, tuple([xs[0], y] + xs[2:]))
    return xs, Implies(antecedent, Exists(y, And(fresh, moved)))


@dataclass(frozen=True)
class DensityVerdict:
    holds: bool
    counterexample: tuple[int, ...] | None
    sentence: str


def check_density(s: FinStructure, name: str, n: int | None = None) -> DensityVerdict:
    if name not in s.signature:
        raise StructureError(f"unknown relation {name}")
    ar = s.signature.arity(name)
    n = ar if n is None else n
    if ar != n:
        raise StructureError(f"arity mismatch: {name} has arity {ar}, density needs {n}")
    vs, matrix = density_sentence(name, n)
    arr = evaluate_array(s, matrix, vs).ravel()
    bad = None
    if not arr.all():
        bad = min(DefSet.from_mask(~arr, s.size, n).tuples)
    return DensityVerdict(bad is None, bad, to_text(forall_all(vs, matrix)))
