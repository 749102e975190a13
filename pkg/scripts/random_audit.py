"""Audit structural invariants over a stream of random models.

Builds the tree structure for each generated model under each context,
replays the model-following profile and all single-agent deviations,
and checks rank stability, leaf correspondence, and the state-count
bound. Prints aggregate statistics; exits nonzero on any violation.
"""

import argparse
import os
import random
import sys
from collections import Counter

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from causalcgs.bridge import causal_profile, play_deviation
from causalcgs.builder import (
    build_causal_cgs,
    check_leaf_correspondence,
    check_rank_stability,
    corresponds,
    size_report,
)
from causalcgs.cgs import play
from causalcgs.model import all_contexts, evaluate
from causalcgs.randgen import GeneratorConfig, random_model


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--models", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-endogenous", type=int, default=5)
    parser.add_argument("--max-agents", type=int, default=3)
    args = parser.parse_args()

    config = GeneratorConfig(
        max_endogenous=args.max_endogenous, max_agents=args.max_agents
    )
    rng = random.Random(args.seed)
    violations = 0
    builds = plays = 0
    state_counts = Counter()
    for _ in range(args.models):
        model = random_model(rng, config)
        for context in all_contexts(model):
            cgs = build_causal_cgs(model, context, {})
            builds += 1
            state_counts[len(cgs.states)] += 1
            violations += len(check_rank_stability(cgs))
            violations += len(check_leaf_correspondence(cgs))
            rep = size_report(cgs)
            if rep.states > rep.bound + 1:
                violations += 1
            profile = causal_profile(model, context, cgs)
            leaf = play(cgs.base, cgs.root, profile)[-1]
            if not corresponds(cgs.assignments[leaf], model, context, {}):
                violations += 1
            plays += 1
            actual = evaluate(model, context)
            for agent in model.agents_in_order:
                for value in model.domain[agent]:
                    if value == actual[agent]:
                        continue
                    play_deviation(cgs, model, context, {agent: value})
                    plays += 1

    print(f"models: {args.models}, builds: {builds}, plays: {plays}")
    print("state-count histogram:")
    for count in sorted(state_counts):
        print(f"  {count:3d} states: {state_counts[count]} structures")
    print(f"violations: {violations}")
    print("result:", "PASS" if violations == 0 else "FAIL")
    return 0 if violations == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
