import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aritylab.core import DefSet, FinStructure, Signature, pure_set
from aritylab.factory import circular_order, linear_order
from aritylab.formula import (And, Atom, Eq, EvaluationError, Exists, Forall, Iff, Implies,
                              Not, Or, ParseError, evaluate, free_variables, holds,
                              parse_formula, to_text)
from aritylab.symmetry import automorphism_group

VARS = ["x", "y", "z"]


def test_parse_implication():
    f = parse_formula("K3(x,y,z) -> K3(y,z,x)")
    assert f == Implies(Atom("K3", ("x", "y", "z")), Atom("K3", ("y", "z", "x")))


def test_parse_equality():
    assert parse_formula("x = y") == Eq("x", "y")


def test_parse_forall():
    f = parse_formula("forall t (K3(x,y,t) | K3(t,y,z))")
    assert f == Forall("t", Or(Atom("K3", ("x", "y", "t")), Atom("K3", ("t", "y", "z"))))


def test_precedence():
    f = parse_formula("!A(x) & B(x) | C(x) -> D(x) <-> E(x)  # trailing comment")
    a, b, c, d, e = (Atom(n, ("x",)) for n in "ABCDE")
    assert f == Iff(Implies(Or(And(Not(a), b), c), d), e)
    assert parse_formula("A(x) -> B(x) -> C(x)") == Implies(a, Implies(b, Atom("C", ("x",))))


def test_parse_errors():
    for bad in ["K3(x,y", "x = ", "forall (A(x))", "A(x) $ B(x)", "A(x) B(x)"]:
        with pytest.raises(ParseError):
            parse_formula(bad)
    try:
        parse_formula("A(x) & ")
    except ParseError as e:
        assert e.pos == 7


def test_roundtrip_text():
    text = "forall t ((K3(x, y, t) | K3(t, y, z)) & !(x = t))"
    f = parse_formula(text)
    assert parse_formula(to_text(f)) == f


def test_free_variables():
    assert free_variables(parse_formula("K3(x,y,z)")) == ["x", "y", "z"]
    assert free_variables(parse_formula("forall x K3(x,y,z)")) == ["y", "z"]
    assert free_variables(parse_formula("x = x")) == ["x"]


def test_atom_lookup():
    s = circular_order(5)
    assert evaluate(s, "K3(x,y,z)", ["x", "y", "z"]).tuples == s["K3"]


def test_diagonal():
    s = linear_order(3)
    assert evaluate(s, "x = y", ["x", "y"]).tuples == {(a, a) for a in range(3)}


def test_co1_sentence_by_enumeration():
    s = circular_order(5)
    assert holds(s, "forall x forall y forall z (K3(x,y,z) -> K3(y,z,x))")
    k3 = s["K3"]
    direct = all((y, z, x) in k3 for x in range(5) for y in range(5) for z in range(5)
                 if (x, y, z) in k3)
    assert direct


def test_extra_vars_pad_and_permute():
    s = linear_order(3)
    r = evaluate(s, "K2(x,y)", ["y", "w", "x"])
    assert r.tuples == {(b, w, a) for a in range(3) for b in range(3) if a < b for w in range(3)}


def test_repeated_atom_arguments():
    s = circular_order(4)
    assert evaluate(s, "K3(x,x,y)", ["x", "y"]).tuples == {(a, b) for a in range(4) for b in range(4)}


def test_evaluation_errors():
    s = linear_order(3)
    with pytest.raises(EvaluationError):
        evaluate(s, "K9(x,y)", ["x", "y"])
    with pytest.raises(EvaluationError):
        evaluate(s, "K2(x,y,z)", ["x", "y", "z"])
    with pytest.raises(EvaluationError):
        evaluate(s, "K2(x,y)", ["x"])


def test_sentence_gives_zero_ary():
    r = evaluate(pure_set(2), "exists x forall y (x = y)", [])
    assert r.arity == 0 and not r.truth


SIG = Signature((("A", 1), ("B", 2), ("C", 3)))


@st.composite
def small_structures(draw):
    m = draw(st.integers(1, 4))
    rels = []
    for _, ar in SIG.symbols:
        cells = st.tuples(*[st.integers(0, m - 1)] * ar)
        rels.append(frozenset(draw(st.sets(cells, max_size=m**ar))))
    return FinStructure(m, SIG, tuple(rels))


variables = st.sampled_from(VARS)


def _formulas():
    atoms = st.one_of(
        st.builds(lambda a: Atom("A", (a,)), variables),
        st.builds(lambda a, b: Atom("B", (a, b)), variables, variables),
        st.builds(lambda a, b, c: Atom("C", (a, b, c)), variables, variables, variables),
        st.builds(Eq, variables, variables),
    )

    def extend(children):
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
            st.builds(Iff, children, children),
            st.builds(Exists, variables, children),
            st.builds(Forall, variables, children),
        )
    return st.recursive(atoms, extend, max_leaves=6)


formulas = _formulas()


def _mask(s, f):
    return evaluate(s, f, VARS).mask(s.size)


@given(small_structures(), formulas, formulas)
def test_boolean_laws(s, f, g):
    mf, mg = _mask(s, f), _mask(s, g)
    assert np.array_equal(_mask(s, Not(f)), ~mf)
    assert np.array_equal(_mask(s, And(f, g)), mf & mg)
    assert np.array_equal(_mask(s, Or(f, g)), ~(~mf & ~mg))


def _rename_bound(f, old, new):
    """Rename variables bound by quantifiers on ``old`` (``new`` is fresh)."""
    def sub(h, active):
        if isinstance(h, Atom):
            return Atom(h.name, tuple(new if (a == old and active) else a for a in h.args))
        if isinstance(h, Eq):
            return Eq(new if (h.left == old and active) else h.left,
                      new if (h.right == old and active) else h.right)
        if isinstance(h, Not):
            return Not(sub(h.body, active))
        if isinstance(h, (And, Or, Implies, Iff)):
            return type(h)(sub(h.left, active), sub(h.right, active))
        if h.var == old:
            return type(h)(new, sub(h.body, True))
        return type(h)(h.var, sub(h.body, active))
    return sub(f, False)


@given(small_structures(), formulas, variables)
def test_bound_renaming_invariance(s, f, v):
    g = _rename_bound(f, v, "fresh")
    assert free_variables(g) == free_variables(f)
    assert evaluate(s, g, VARS) == evaluate(s, f, VARS)


@given(small_structures(), formulas)
def test_extensions_are_invariant(s, f):
    r = evaluate(s, f, VARS)
    for g in automorphism_group(s).generators:
        assert {tuple(g[x] for x in t) for t in r.tuples} == set(r.tuples)


def test_defset_returned():
    assert isinstance(evaluate(pure_set(2), "x = x", ["x"]), DefSet)
