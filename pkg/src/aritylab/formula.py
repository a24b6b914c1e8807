"""First-order formulas over relational signatures with equality.

Surface syntax::

    atom        Name(v1, ..., vk)
    equality    v = w
    connectives !  &  |  ->  <->      (binding tightest to loosest)
    quantifiers forall v F,  exists v F   (bind like negation)
    comments    # to end of line

``->`` associates to the right, the other binary connectives to the left.

Evaluation works bottom-up: every subformula is turned into a boolean array
indexed by its free variables, and the arrays are cached per subformula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .core import DEFAULT_WORK_CAP, CapExceeded, DefSet, FinStructure, StructureError


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class EvaluationError(ValueError):
    pass


class Formula:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


# -- convenience constructors used by the axiom generators --

def conj(fs) -> Formula:
    fs = list(fs)
    return reduce(And, fs)


def disj(fs) -> Formula:
    fs = list(fs)
    return reduce(Or, fs)


def forall_all(vs, body: Formula) -> Formula:
    for v in reversed(list(vs)):
        body = Forall(v, body)
    return body


def pairwise_distinct(vs) -> Formula | None:
    vs = list(vs)
    parts = [Not(Eq(a, b)) for i, a in enumerate(vs) for b in vs[i + 1:]]
    return conj(parts) if parts else None


# -- free variables --

def free_variables(f: Formula) -> list[str]:
    out: list[str] = []

    def walk(g, bound):
        if isinstance(g, Atom):
            vs = g.args
        elif isinstance(g, Eq):
            vs = (g.left, g.right)
        elif isinstance(g, Not):
            walk(g.body, bound)
            return
        elif isinstance(g, (Exists, Forall)):
            walk(g.body, bound | {g.var})
            return
        else:
            walk(g.left, bound)
            walk(g.right, bound)
            return
        for v in vs:
            if v not in bound and v not in out:
                out.append(v)

    walk(f, frozenset())
    return out


# -- printing --

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def to_text(f: Formula) -> str:
    def go(g, ctx):
        if isinstance(g, Atom):
            return f"{g.name}({','.join(g.args)})"
        if isinstance(g, Eq):
            s = f"{g.left} = {g.right}"
            return f"({s})" if ctx > 0 else s
        if isinstance(g, Not):
            return "!" + go(g.body, 5)
        if isinstance(g, (Exists, Forall)):
            q = "exists" if isinstance(g, Exists) else "forall"
            return f"{q} {g.var} " + go(g.body, 5)
        p = _PREC[type(g)]
        if isinstance(g, Implies):
            s = f"{go(g.left, p + 1)} -> {go(g.right, p)}"
        else:
            s = f"{go(g.left, p)} {_OPS[type(g)]} {go(g.right, p + 1)}"
        return f"({s})" if ctx > p else s

    return go(f, 0)


# -- parsing --

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<op><->|->|[!&|(),=])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_@]*)
""", re.VERBOSE)


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unknown token {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            toks.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None, kind=None):
        tok = self.toks[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def at(self, value):
        return self.peek()[1] == value and self.peek()[0] == "op"

    def iff(self):
        f = self.imp()
        while self.at("<->"):
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self):
        f = self.or_()
        if self.at("->"):
            self.take()
            return Implies(f, self.imp())
        return f

    def or_(self):
        f = self.and_()
        while self.at("|"):
            self.take()
            f = Or(f, self.and_())
        return f

    def and_(self):
        f = self.unary()
        while self.at("&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "!":
            self.take()
            return Not(self.unary())
        if kind == "ident" and val in ("forall", "exists"):
            self.take()
            var = self.take(kind="ident")[1]
            body = self.unary()
            return Forall(var, body) if val == "forall" else Exists(var, body)
        return self.primary()

    def primary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if kind != "ident":
            raise ParseError(f"unexpected {val or 'end of input'!r}", pos)
        self.take()
        if self.at("("):
            self.take()
            args = [self.take(kind="ident")[1]]
            while self.at(","):
                self.take()
                args.append(self.take(kind="ident")[1])
            self.take(")")
            return Atom(val, tuple(args))
        if self.at("="):
            self.take()
            return Eq(val, self.take(kind="ident")[1])
        raise ParseError(f"expected '(' or '=' after {val!r}", self.peek()[2])


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.iff()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {val!r}", pos)
    return f


# -- evaluation --

class _Evaluator:
    def __init__(self, s: FinStructure, work_cap: int):
        self.s = s
        self.cap = work_cap
        self.memo: dict[Formula, tuple[tuple[str, ...], np.ndarray]] = {}
        self.masks: dict[str, np.ndarray] = {}

    def check(self, nvars):
        if self.s.size**nvars > self.cap:
            raise CapExceeded(f"{self.s.size}^{nvars} assignments exceed work cap {self.cap}")

    def rel_array(self, name, ar):
        if name not in self.masks:
            if name not in self.s.signature:
                raise EvaluationError(f"unknown symbol {name}")
            self.masks[name] = self.s.relation(name).mask(self.s.size).reshape((self.s.size,) * ar)
        return self.masks[name]

    def align(self, vs, arr, target):
        """Transpose/expand ``arr`` (over vs) so it broadcasts over target."""
        order = [vs.index(v) for v in target if v in vs]
        arr = np.transpose(arr, order) if arr.ndim else arr
        shape = [self.s.size if v in vs else 1 for v in target]
        return arr.reshape(shape)

    def ev(self, f):
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        out = self._ev(f)
        self.memo[f] = out
        return out

    def _ev(self, f):
        m = self.s.size
        if isinstance(f, Atom):
            if f.name not in self.s.signature:
                raise EvaluationError(f"unknown symbol {f.name}")
            ar = self.s.signature.arity(f.name)
            if ar != len(f.args):
                raise EvaluationError(f"{f.name} has arity {ar}, used with {len(f.args)} arguments")
            arr = self.rel_array(f.name, ar)
            vs = list(dict.fromkeys(f.args))
            if len(vs) < len(f.args):
                letters = "abcdefghijklmnopqrstuvwxyz"
                src = "".join(letters[vs.index(v)] for v in f.args)
                arr = np.einsum(f"{src}->{letters[:len(vs)]}", arr.astype(np.uint8)) > 0
            return tuple(vs), arr
        if isinstance(f, Eq):
            if f.left == f.right:
                return (f.left,), np.ones(m, dtype=bool)
            return (f.left, f.right), np.eye(m, dtype=bool)
        if isinstance(f, Not):
            vs, arr = self.ev(f.body)
            return vs, ~arr
        if isinstance(f, (Exists, Forall)):
            vs, arr = self.ev(f.body)
            if f.var not in vs:
                return vs, arr
            ax = vs.index(f.var)
            red = arr.any(axis=ax) if isinstance(f, Exists) else arr.all(axis=ax)
            return tuple(v for v in vs if v != f.var), red
        lv, la = self.ev(f.left)
        rv, ra = self.ev(f.right)
        target = tuple(dict.fromkeys(lv + rv))
        self.check(len(target))
        la, ra = self.align(lv, la, target), self.align(rv, ra, target)
        if isinstance(f, And):
            arr = la & ra
        elif isinstance(f, Or):
            arr = la | ra
        elif isinstance(f, Implies):
            arr = ~la | ra
        else:
            arr = la == ra
        return target, np.broadcast_to(arr, (m,) * len(target))


def evaluate_array(s: FinStructure, f: Formula, vars, work_cap: int = DEFAULT_WORK_CAP) -> np.ndarray:
    """Extension of ``f`` as a boolean array of shape ``(m,) * len(vars)``."""
    vars = tuple(vars)
    if len(set(vars)) != len(vars):
        raise EvaluationError(f"repeated variable in {vars}")
    missing = [v for v in free_variables(f) if v not in vars]
    if missing:
        raise EvaluationError(f"free variables {missing} not listed in vars")
    ev = _Evaluator(s, work_cap)
    ev.check(len(vars))
    vs, arr = ev.ev(f)
    arr = ev.align(vs, arr, vars)
    return np.broadcast_to(arr, (s.size,) * len(vars))


def evaluate(s: FinStructure, f: Formula | str, vars=(), work_cap: int = DEFAULT_WORK_CAP) -> DefSet:
    if isinstance(f, str):
        f = parse_formula(f)
    arr = evaluate_array(s, f, vars, work_cap)
    try:
        return DefSet.from_mask(arr.ravel(), s.size, len(tuple(vars)))
    except StructureError as e:  # pragma: no cover
        raise EvaluationError(str(e)) from e


def holds(s: FinStructure, sentence: Formula | str) -> bool:
    if isinstance(sentence, str):
        sentence = parse_formula(sentence)
    if free_variables(sentence):
        raise EvaluationError(f"not a sentence: free {free_variables(sentence)}")
    return evaluate(s, sentence, ()).truth
