"""Command line: one verb per call, text or JSON reports.

Exit codes: 0 ok, 1 usage or parse error, 2 validation error, 3 work or
size cap exceeded, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
from importlib import resources
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import dsl
from .algebra import composition, disjoint_union
from .arity import (NotInvariantError, formula_arity, is_almost_n_ary, is_n_ary,
                    orbit_relations, structure_arity, witness_degree_search)
from .config import ConfigError, load_config
from .core import DEFAULT_SIZE_CAP, CapExceeded, DefSet, FinStructure, StructureError
from .corpus import generate_corpus
from .factory import VARIANTS, check_axioms, check_density
from .formula import EvaluationError, ParseError, evaluate, free_variables, parse_formula
from .oracle import (MAX_NAIVE_CELLS, MAX_NAIVE_SIZE, naive_is_n_ary,
                     naive_structure_arity, read_fixtures)
from .symmetry import automorphism_group, orbit_partition

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class Outcome:
    report: dict
    text: str
    code: int = EXIT_OK


# -- structure sources --

def resolve_source(src: str, variant: str = "literal", size_cap: int = DEFAULT_SIZE_CAP) -> FinStructure:
    """A DSL file path, or a builder expression such as ``circular:5`` or ``spherical:5:4``."""
    path = Path(src)
    if path.is_file():
        return dsl.load(path, size_cap)
    kind, *args = src.split(":")
    if kind in ("linear", "circular", "pure", "spherical") and args:
        return dsl.build(kind, args, variant)
    raise UsageError(f"no such file or builder expression: {src!r}")


def _single_source(args) -> FinStructure:
    picks = [(k, v) for k in ("linear", "circular", "pure", "spherical")
             if (v := getattr(args, k, None)) is not None]
    given = len(picks) + len(args.inputs or [])
    if given != 1:
        raise UsageError("give exactly one structure (--in FILE or one builder flag)")
    if picks:
        kind, v = picks[0]
        return dsl.build(kind, [str(x) for x in (v if isinstance(v, list) else [v])], args.variant)
    return resolve_source(args.inputs[0], args.variant, args.size_cap)


def _two_sources(args) -> tuple[FinStructure, FinStructure]:
    if len(args.inputs or []) != 2:
        raise UsageError(f"{args.verb} needs exactly two --in arguments")
    return tuple(resolve_source(x, args.variant, args.size_cap) for x in args.inputs)


def _kmax(args, s: FinStructure) -> int:
    if args.kmax is not None:
        return args.kmax
    return s.size if args.config.kmax_default is None else min(args.config.kmax_default, s.size)


# -- report pieces --

def structure_dict(s: FinStructure) -> dict:
    return {
        "name": s.name,
        "size": s.size,
        "relations": [{"name": n, "arity": a, "tuples": [list(t) for t in sorted(rel)]}
                      for (n, a), rel in s.items()],
    }


def _defset_dict(r: DefSet) -> dict:
    return {"arity": r.arity, "tuples": [list(t) for t in sorted(r.tuples)]}


def _formula_relation(s: FinStructure, args) -> tuple[DefSet, str, list[str]]:
    if args.rel is not None:
        if args.rel not in s.signature:
            raise StructureError(f"unknown relation {args.rel}")
        r = s.relation(args.rel)
        return r, args.rel, [f"x{i}" for i in range(1, r.arity + 1)]
    if args.formula is None:
        raise UsageError("give --formula or --rel")
    f = parse_formula(args.formula)
    vs = args.vars.split(",") if args.vars else free_variables(f)
    vs = [v.strip() for v in vs if v.strip()]
    return evaluate(s, f, vs, args.config.cap), args.formula, vs


# -- verbs --

def cmd_build(args) -> Outcome:
    s = _single_source(args)
    return Outcome({"verb": "build", "structure": structure_dict(s)}, dsl.dumps(s))


def _combine(args, op) -> Outcome:
    a, b = _two_sources(args)
    if op == "union":
        s = disjoint_union(a, b, size_cap=args.size_cap)
    else:
        s = composition(a, b, shared=tuple(args.shared or ()), size_cap=args.size_cap)
    return Outcome({"verb": op, "structure": structure_dict(s)}, dsl.dumps(s))


def cmd_union(args) -> Outcome:
    return _combine(args, "union")


def cmd_compose(args) -> Outcome:
    return _combine(args, "compose")


def cmd_aut(args) -> Outcome:
    s = _single_source(args)
    g = automorphism_group(s)
    report = {"verb": "aut", "structure": s.name, "size": s.size, "order": g.order,
              "base": list(g.base), "generators": [list(p) for p in g.generators]}
    lines = [f"structure {s.name}: |Aut| = {g.order}", f"base {list(g.base)}"]
    lines += [f"generator {list(p)}" for p in g.generators]
    return Outcome(report, "\n".join(lines) + "\n")


def cmd_orbits(args) -> Outcome:
    s = _single_source(args)
    part = orbit_partition(s, automorphism_group(s), args.k, args.config.cap)
    classes = [sorted(c.tuples) for c in part.classes()]
    report = {"verb": "orbits", "structure": s.name, "k": args.k,
              "class_count": part.class_count,
              "classes": [[list(t) for t in c] for c in classes]}
    lines = [f"structure {s.name}: {part.class_count} orbit(s) on {args.k}-tuples"]
    lines += [f"O_{args.k}_{i}: {len(c)} tuple(s), first {c[0]}" for i, c in enumerate(classes)]
    return Outcome(report, "\n".join(lines) + "\n")


def cmd_arity(args) -> Outcome:
    s = _single_source(args)
    k_max = _kmax(args, s)
    rep = structure_arity(s, k_max, args.config.cap)
    code = EXIT_OK
    if args.oracle:
        if s.size > MAX_NAIVE_SIZE or s.size**k_max > MAX_NAIVE_CELLS:
            rep.notes.append("oracle skipped: instance above the brute-force limits")
        else:
            naive = naive_structure_arity(s, k_max)
            rep.oracle_checked = True
            if naive != rep.ar:
                rep.notes.append(f"oracle mismatch: naive ar = {naive}")
                code = EXIT_MISMATCH
    report = {"verb": "arity", **rep.to_dict()}
    lines = [f"structure {s.name}: ar = {rep.ar} (k <= {rep.k_max})"]
    lines += [f"  {name}: formula arity {a}" for name, a in rep.relations]
    lines += [f"  k = {k}: least n = {n}" for k, n in rep.levels]
    lines += [f"  note: {x}" for x in rep.notes]
    return Outcome(report, "\n".join(lines) + "\n", code)


def cmd_formula_arity(args) -> Outcome:
    s = _single_source(args)
    r, label, vs = _formula_relation(s, args)
    group = automorphism_group(s)
    value = formula_arity(s, group, r, args.config.cap)
    report = {"verb": "formula-arity", "structure": s.name, "formula": label,
              "vars": vs, "arity": value}
    return Outcome(report, f"{label} on {s.name}: formula arity {value}\n")


def cmd_almost(args) -> Outcome:
    s = _single_source(args)
    group = automorphism_group(s)
    k_max = _kmax(args, s)
    witnesses = []
    for text in args.witness or []:
        f = parse_formula(text)
        witnesses.append((text, evaluate(s, f, free_variables(f), args.config.cap)))
    for name in args.witness_rel or []:
        if name not in s.signature:
            raise StructureError(f"unknown relation {name}")
        witnesses.append((name, s.relation(name)))
    ok = is_almost_n_ary(s, group, args.n, witnesses, k_max, args.config.cap)
    report = {"verb": "almost", "structure": s.name, "n": args.n, "k_max": k_max,
              "witnesses": [name for name, _ in witnesses], "almost": ok}
    verdict = "is" if ok else "is not"
    return Outcome(report, f"{s.name} {verdict} almost {args.n}-ary with "
                           f"{len(witnesses)} witness(es) (k <= {k_max})\n")


def cmd_degree(args) -> Outcome:
    s = _single_source(args)
    group = automorphism_group(s)
    k_max = _kmax(args, s)
    res = witness_degree_search(s, group, args.n, args.budget, args.rmax, k_max, args.config.cap)
    report = {"verb": "degree", "structure": s.name, "n": args.n, "k_max": k_max,
              "degree": {"m": res.degree.m, "r": res.degree.r},
              "witnesses": list(res.witnesses), "optimal": res.optimal, "rank": res.rank}
    text = (f"{s.name}: almost {args.n}-ary with degree ({res.degree.m}, {res.degree.r})"
            f"{'' if res.optimal else ' (greedy, not proven minimal)'}\n")
    if res.witnesses:
        text += "witnesses: " + ", ".join(res.witnesses) + "\n"
    return Outcome(report, text)


def cmd_eval(args) -> Outcome:
    s = _single_source(args)
    if args.formula is None:
        raise UsageError("eval needs --formula")
    f = parse_formula(args.formula)
    vs = [v.strip() for v in args.vars.split(",") if v.strip()] if args.vars else free_variables(f)
    r = evaluate(s, f, vs, args.config.cap)
    report = {"verb": "eval", "structure": s.name, "formula": args.formula, "vars": vs,
              "result": _defset_dict(r)}
    if r.arity == 0:
        report["truth"] = r.truth
        text = f"{'true' if r.truth else 'false'}\n"
    else:
        text = f"{len(r.tuples)} tuple(s) over ({', '.join(vs)})\n"
        text += "".join(f"{t}\n" for t in sorted(r.tuples))
    return Outcome(report, text)


def _verdict_dict(v) -> dict:
    return {"axiom": v.axiom, "distinct_only": v.distinct_only, "holds": v.holds,
            "counterexample": None if v.counterexample is None else list(v.counterexample),
            "sentence": v.sentence}


def cmd_check_axioms(args) -> Outcome:
    s = _single_source(args)
    if args.rel is None and not s.signature.names:
        raise StructureError("structure has no relations")
    name = args.rel or s.signature.names[0]
    verdicts = check_axioms(s, name, args.n)
    dens = check_density(s, name, args.n)
    report = {"verb": "check-axioms", "structure": s.name, "relation": name,
              "n": s.signature.arity(name),
              "axioms": [_verdict_dict(v) for v in verdicts],
              "density": {"holds": dens.holds,
                          "counterexample": None if dens.counterexample is None
                          else list(dens.counterexample),
                          "sentence": dens.sentence}}
    lines = []
    for v in verdicts:
        scope = "distinct" if v.distinct_only else "all"
        tail = "" if v.holds else f"  counterexample {v.counterexample}"
        lines.append(f"{v.axiom:6} {scope:8} {'holds' if v.holds else 'FAILS'}{tail}")
    tail = "" if dens.holds else f"  counterexample {dens.counterexample}"
    lines.append(f"density all      {'holds' if dens.holds else 'FAILS'}{tail}")
    return Outcome(report, "\n".join(lines) + "\n")


def cmd_oracle_check(args) -> Outcome:
    if args.corpus:
        if args.inputs:
            raise UsageError("--corpus and --in are exclusive")
        structures = generate_corpus(args.seed if args.seed is not None else args.config.seed)
    else:
        structures = [_single_source(args)]
    k_max = 3 if args.kmax is None else args.kmax
    n_max = 3 if args.nmax is None else args.nmax
    expected = None
    if args.fixtures:
        expected = {(r.structure, r.relation, r.n): r.verdict for r in read_fixtures(args.fixtures)}
    checked, mismatches, missing = 0, [], 0
    for s in structures:
        group = automorphism_group(s)
        for k in range(1, k_max + 1):
            for rname, r in orbit_relations(s, group, k, args.config.cap):
                for n in range(n_max + 1):
                    fast = is_n_ary(s, group, r, n, args.config.cap)
                    if expected is None:
                        ref = naive_is_n_ary(s, r, n)
                    elif (s.name, rname, n) in expected:
                        ref = expected[(s.name, rname, n)]
                    else:
                        missing += 1
                        continue
                    checked += 1
                    if fast != ref:
                        mismatches.append({"structure": s.name, "relation": rname, "n": n,
                                           "fast": fast, "reference": ref})
    ok = not mismatches and missing == 0
    report = {"verb": "oracle-check", "reference": "fixtures" if expected is not None else "naive",
              "structures": [s.name for s in structures], "k_max": k_max, "n_max": n_max,
              "checked": checked, "missing": missing, "mismatches": mismatches, "ok": ok}
    text = f"checked {checked} verdict(s), {len(mismatches)} mismatch(es), {missing} missing\n"
    text += "".join(f"MISMATCH {m['structure']} {m['relation']} n={m['n']}: "
                    f"fast={m['fast']} reference={m['reference']}\n" for m in mismatches)
    return Outcome(report, text, EXIT_OK if ok else EXIT_MISMATCH)


VERBS = {
    "build": cmd_build, "check-axioms": cmd_check_axioms, "aut": cmd_aut,
    "orbits": cmd_orbits, "arity": cmd_arity, "formula-arity": cmd_formula_arity,
    "almost": cmd_almost, "degree": cmd_degree, "union": cmd_union,
    "compose": cmd_compose, "eval": cmd_eval, "oracle-check": cmd_oracle_check,
}


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="inputs", action="append", metavar="SRC",
                        help="DSL file or builder expression (circular:5, spherical:5:4)")
    common.add_argument("--linear", type=int, metavar="M")
    common.add_argument("--circular", type=int, metavar="M")
    common.add_argument("--pure", type=int, metavar="M")
    common.add_argument("--spherical", type=int, nargs=2, metavar=("M", "N"))
    common.add_argument("--variant", choices=VARIANTS, default="literal")
    common.add_argument("--json", action="store_true")
    common.add_argument("--kmax", type=int)
    common.add_argument("--nmax", type=int)
    common.add_argument("--rmax", type=int)
    common.add_argument("--cap", type=int, metavar="CELLS")
    common.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP)
    common.add_argument("--seed", type=int)
    common.add_argument("--config", metavar="FILE")
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")

    parser = _Parser(prog="aritylab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    for verb in VERBS:
        p = sub.add_parser(verb, parents=[common])
        if verb in ("formula-arity", "eval"):
            p.add_argument("--formula")
            p.add_argument("--vars", help="comma-separated variable order")
        if verb in ("formula-arity", "check-axioms"):
            p.add_argument("--rel")
        if verb == "check-axioms":
            p.add_argument("--n", type=int)
        if verb == "orbits":
            p.add_argument("--k", type=int, default=1)
        if verb in ("almost", "degree"):
            p.add_argument("--n", type=int, default=1)
        if verb == "almost":
            p.add_argument("--witness", action="append", metavar="FORMULA")
            p.add_argument("--witness-rel", action="append", metavar="NAME")
        if verb == "degree":
            p.add_argument("--budget", type=int, default=5000)
        if verb == "arity":
            p.add_argument("--oracle", action="store_true",
                           help="cross-check ar against the brute-force oracle")
        if verb == "compose":
            p.add_argument("--shared", action="append", metavar="NAME")
        if verb == "oracle-check":
            p.add_argument("--corpus", action="store_true")
            p.add_argument("--fixtures", metavar="FILE")
    return parser


def report_schema() -> dict:
    """The JSON schema every ``--json`` report validates against."""
    return json.loads(resources.files("aritylab").joinpath("report.schema.json").read_text())


def render(outcome: Outcome, as_json: bool) -> str:
    if as_json:
        return json.dumps(outcome.report, indent=2) + "\n"
    return outcome.text


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = make_parser().parse_args(argv)
        args.config = load_config(args.config)
        if args.cap is not None:
            if args.cap < 1:
                raise UsageError("--cap must be positive")
            args.config = replace(args.config, cap=args.cap)
        outcome = VERBS[args.verb](args)
    except (UsageError, ParseError, dsl.DSLError, ConfigError, OSError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=stderr)
        return EXIT_CAP
    except (StructureError, EvaluationError, NotInvariantError, ValueError) as e:
        print(f"invalid: {e}", file=stderr)
        return EXIT_INVALID
    except SystemExit as e:  # --help
        return e.code or EXIT_OK
    text = render(outcome, args.json)
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return outcome.code


def main() -> None:
    sys.exit(run())
