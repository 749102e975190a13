"""Reproduce the semi-automated vehicle example end to end.

Parses the bundled model file, prints the ranking, builds the tree
structure, replays the model-following profile and the two agent
deviations, enumerates the but-for causes of the safe outcome, and runs
both bridge checks. Optionally writes DOT and JSON exports.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from causalcgs.bridge import (
    causal_profile,
    check_prop_cause_iff_strategy,
    check_prop_superset_strategy,
    play_deviation,
)
from causalcgs.builder import build_causal_cgs, size_report
from causalcgs.causality import CandidateCause, Witness, enumerate_causes
from causalcgs.cgs import play
from causalcgs.dsl import outcome_formula, parse_checked
from causalcgs.export import export_dot, export_json
from causalcgs.graph import agent_ranking, build_network, variable_levels
from causalcgs.model import evaluate

DEFAULT_MODEL = os.path.join(os.path.dirname(__file__), "..", "models", "vehicle.scm")


def fmt_state(state) -> str:
    return f"q_{{{state.i},{state.j}}}"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--model", default=DEFAULT_MODEL, help="model file to load")
    parser.add_argument("--out", default=None, help="directory for DOT/JSON exports")
    args = parser.parse_args()

    with open(args.model, "r", encoding="utf-8") as handle:
        doc = parse_checked(handle.read())
    model, context = doc.model, doc.context
    actual = evaluate(model, context)
    print("actual setting:", " ".join(f"{v}={actual[v]}" for v in model.endo_names))

    levels = variable_levels(build_network(model), model)
    ranking = agent_ranking(model, levels)
    for name in model.endo_names:
        role = "agent" if name in model.agent_set else "environment"
        print(f"  {name}: level {levels[name]}, rank {ranking.rho[name]} ({role})")
    print(f"n_max = {ranking.n_max}")

    cgs = build_causal_cgs(model, context, {})
    rep = size_report(cgs)
    print(f"structure: {rep.states} states (bound {rep.bound}), "
          f"{rep.transitions} transitions, {rep.leaves} leaves")

    profile = causal_profile(model, context, cgs)
    history = play(cgs.base, cgs.root, profile)
    print("profile play:", " -> ".join(fmt_state(s) for s in history))
    for agent in model.agents_in_order:
        for value in model.domain[agent]:
            if value == actual[agent]:
                continue
            leaf = play_deviation(cgs, model, context, {agent: value})
            col = cgs.assignments[leaf]["Col"]
            print(f"deviation {agent}={value}: leaf {fmt_state(leaf)}, Col={col}")

    outcome = outcome_formula(doc, "no_collision")
    print("agent but-for causes of no_collision:")
    for cert in enumerate_causes(model, context, outcome, restrict_to_agents=True):
        if cert.witness.vars:
            continue
        pairs = ", ".join(
            f"{v}={x}" for v, x in zip(cert.cause.vars, cert.cause.actual_values)
        )
        alts = ", ".join(
            f"{v}={x}" for v, x in zip(cert.cause.vars, cert.alternative)
        )
        print(f"  {{{pairs}}} with alternative {{{alts}}}")

    candidate = CandidateCause(("DA",), (actual["DA"],))
    witness = Witness(("HD",), (actual["HD"],))
    for label, verdict in (
        ("fixed-witness", check_prop_cause_iff_strategy(
            model, context, candidate, witness, outcome)),
        ("superset-coalition", check_prop_superset_strategy(
            model, context, candidate, witness, outcome)),
    ):
        word = "agree" if verdict.agree else "DISAGREE"
        print(f"bridge check ({label}, X={{DA}}, W={{HD}}): {word}")

    if args.out:
        os.makedirs(args.out, exist_ok=True)
        dot_path = os.path.join(args.out, "vehicle.dot")
        json_path = os.path.join(args.out, "vehicle.json")
        with open(dot_path, "w", encoding="utf-8") as handle:
            handle.write(export_dot(cgs))
        with open(json_path, "w", encoding="utf-8") as handle:
            handle.write(export_json(cgs))
        print(f"wrote {dot_path} and {json_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
