"""Regenerate the committed oracle fixtures under tests/fixtures.

Every value here comes from the brute-force oracle or the axiom checker, never
from the fast subtype/orbit path it is later compared with.

    python3 scripts/generate_fixtures.py [--out tests/fixtures] [--seed N]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from aritylab.core import DefSet, pure_set
from aritylab.corpus import DEFAULT_SEED, generate_corpus
from aritylab.factory import VARIANTS, check_axioms, circular_order, linear_order, spherical_chain
from aritylab.oracle import (naive_automorphisms, naive_formula_arity, orbit_fixture_records,
                             write_fixtures)

ROOT = Path(__file__).resolve().parents[1]


def aut_orders() -> list[str]:
    rows = []
    for m in range(1, 7):
        rows.append((pure_set(m).name, len(naive_automorphisms(pure_set(m)))))
    for m in range(1, 8):
        rows.append((linear_order(m).name, len(naive_automorphisms(linear_order(m)))))
    for m in range(3, 8):
        rows.append((circular_order(m).name, len(naive_automorphisms(circular_order(m)))))
    return ["# structure\torder"] + [f"{name}\t{order}" for name, order in rows]


def corpus_aut_orders(seed: int) -> list[str]:
    return ["# structure\torder"] + [f"{s.name}\t{len(naive_automorphisms(s))}"
                                     for s in generate_corpus(seed)]


def axiom_table() -> list[str]:
    lines = ["# variant\tn\tm\taxiom\tscope\tholds\tcounterexample"]
    for variant in VARIANTS:
        for n in (4, 5):
            for m in range(1, 8):
                s = spherical_chain(m, n, variant)
                for v in check_axioms(s, f"K{n}", n):
                    scope = "distinct" if v.distinct_only else "all"
                    cex = "-" if v.counterexample is None else ",".join(map(str, v.counterexample))
                    lines.append(f"{variant}\t{n}\t{m}\t{v.axiom}\t{scope}\t"
                                 f"{str(v.holds).lower()}\t{cex}")
    return lines


def circular_k3_arities() -> list[str]:
    lines = ["# m\tformula_arity_of_K3"]
    for m in range(3, 8):
        s = circular_order(m)
        lines.append(f"{m}\t{naive_formula_arity(s, DefSet(3, s['K3']))}")
    return lines


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "tests" / "fixtures")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    records = [r for s in generate_corpus(args.seed) for r in orbit_fixture_records(s, 3, 3)]
    write_fixtures(args.out / "oracle_verdicts.tsv", records)
    print(f"oracle_verdicts.tsv: {len(records)} records ({time.perf_counter() - t0:.1f}s)")

    for name, lines in [("aut_orders.tsv", aut_orders()),
                        ("corpus_aut_orders.tsv", corpus_aut_orders(args.seed)),
                        ("axiom_table.tsv", axiom_table()),
                        ("circular_k3_arity.tsv", circular_k3_arities())]:
        (args.out / name).write_text("\n".join(lines) + "\n")
        print(f"{name}: {len(lines) - 1} rows")


if __name__ == "__main__":
    main()
