"""Sweep the union and composition arity laws over the seeded corpus.

    python3 scripts/run_laws.py [--law union|composition|both] [--kcap 4] [--dump DIR]

Prints a summary per law and the first few failing pairs.  Singleton factors
(every builder at size 1) are added so the singleton clause of the
composition law is exercised.
"""

from __future__ import annotations

import argparse
import time
from collections import Counter

from aritylab.corpus import DEFAULT_SEED, builders, generate_corpus
from aritylab.laws import sweep


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--law", choices=("union", "composition", "both"), default="both")
    ap.add_argument("--kcap", type=int, default=4)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--dump", metavar="DIR")
    ap.add_argument("--show", type=int, default=10)
    args = ap.parse_args(argv)
    corpus = generate_corpus(args.seed)
    runs = []
    if args.law in ("union", "both"):
        runs.append(("union", corpus, dict(max_size=4)))
    if args.law in ("composition", "both"):
        runs.append(("composition", builders(1) + corpus, dict(max_product=16)))
    for law, structures, limits in runs:
        t0 = time.perf_counter()
        cases = sweep(law, structures, k_cap=args.kcap, dump_dir=args.dump, **limits)
        bad = [c for c in cases if not c.holds]
        kinds = Counter((c.computed - c.predicted > 0, c.exact) for c in bad)
        print(f"{law}: {len(cases)} pairs, {len(bad)} violations "
              f"({time.perf_counter() - t0:.1f}s)")
        for (above, exact), count in sorted(kinds.items()):
            print(f"  computed {'above' if above else 'below'} prediction, "
                  f"{'exact' if exact else f'k <= {args.kcap}'}: {count}")
        for c in bad[:args.show]:
            print(f"  {c.left} | {c.right}: ar {c.ar_left}, {c.ar_right} -> "
                  f"predicted {c.predicted}, computed {c.computed} (k <= {c.k_max})")


if __name__ == "__main__":
    main()
