"""Sweep every candidate/witness pair on a model and tabulate verdicts.

For each nonempty candidate set (agents by default, any endogenous set
with --all-vars) and each witness subset of the remaining endogenous
variables, runs the fixed-witness bridge check and reports whether the
dependence test and the strategy search agreed.
"""

import argparse
import itertools
import sys
import time
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from causalcgs.bridge import witness_sweep
from causalcgs.causality import CandidateCause
from causalcgs.dsl import outcome_formula, parse_checked
from causalcgs.model import evaluate


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("model", help="model file to load")
    parser.add_argument("--outcome", required=True, help="named outcome to test")
    parser.add_argument("--all-vars", action="store_true",
                        help="candidates range over all endogenous variables")
    parser.add_argument("--max-size", type=int, default=2,
                        help="largest candidate set to try")
    args = parser.parse_args()

    with open(args.model, "r", encoding="utf-8") as handle:
        doc = parse_checked(handle.read())
    model, context = doc.model, doc.context
    outcome = outcome_formula(doc, args.outcome)
    actual = evaluate(model, context)

    pool = model.endo_names if args.all_vars else model.agents_in_order
    total = agreed = positive = 0
    start = time.perf_counter()
    for size in range(1, min(args.max_size, len(pool)) + 1):
        for subset in itertools.combinations(pool, size):
            candidate = CandidateCause(subset, tuple(actual[v] for v in subset))
            for witness, verdict in witness_sweep(
                model, context, candidate, outcome
            ):
                total += 1
                agreed += verdict.agree
                found = verdict.cause_side is not None
                positive += found
                mark = "agree" if verdict.agree else "DISAGREE"
                names = ",".join(candidate.vars) or "-"
                wnames = ",".join(witness.vars) or "-"
                print(f"X={{{names}}} W={{{wnames}}} "
                      f"{'cause' if found else 'no-cause'} {mark}")
    elapsed = time.perf_counter() - start
    print(f"{agreed}/{total} verdicts agree, {positive} positive, {elapsed:.2f}s")
    return 0 if agreed == total else 1


if __name__ == "__main__":
    raise SystemExit(main())
