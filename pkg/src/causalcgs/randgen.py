"""Seeded random model generation for property sweeps.

Models are binary-domain and acyclic by construction: the equation for the
k-th endogenous variable only mentions exogenous variables and endogenous
variables declared before it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import (
    BOOL,
    And,
    CausalModel,
    Const,
    EqTest,
    EventFormula,
    Expression,
    Ite,
    Not,
    Or,
    Var,
    make_model,
)


@dataclass(frozen=True)
class GeneratorConfig:
    min_exogenous: int = 1
    max_exogenous: int = 3
    min_endogenous: int = 2
    max_endogenous: int = 5
    min_agents: int = 1
    max_agents: int = 3
    max_depth: int = 3
    leaf_probability: float = 0.3
    const_probability: float = 0.2


_INNER_KINDS = ("not", "and", "or", "ite", "eqtest")


def random_expression(
    rng: random.Random, available: list[str], depth: int, config: GeneratorConfig
) -> Expression:
    if depth <= 0 or rng.random() < config.leaf_probability:
        if rng.random() < config.const_probability:
            return Const(rng.choice(BOOL))
        return Var(rng.choice(available))
    kind = rng.choice(_INNER_KINDS)
    if kind == "not":
        return Not(random_expression(rng, available, depth - 1, config))
    if kind == "and":
        return And(
            random_expression(rng, available, depth - 1, config),
            random_expression(rng, available, depth - 1, config),
        )
    if kind == "or":
        return Or(
            random_expression(rng, available, depth - 1, config),
            random_expression(rng, available, depth - 1, config),
        )
    if kind == "ite":
        return Ite(
            random_expression(rng, available, depth - 1, config),
            random_expression(rng, available, depth - 1, config),
            random_expression(rng, available, depth - 1, config),
        )
    return EqTest(rng.choice(available), rng.choice(BOOL))


def random_model(rng: random.Random, config: GeneratorConfig = GeneratorConfig()) -> CausalModel:
    n_exo = rng.randint(config.min_exogenous, config.max_exogenous)
    n_endo = rng.randint(config.min_endogenous, config.max_endogenous)
    n_agents = rng.randint(config.min_agents, min(config.max_agents, n_endo))
    exo_names = [f"U{k}" for k in range(1, n_exo + 1)]
    endo_names = [f"X{k}" for k in range(1, n_endo + 1)]
    equations = {}
    for k, name in enumerate(endo_names):
        available = exo_names + endo_names[:k]
        equations[name] = random_expression(rng, available, config.max_depth, config)
    agent_positions = sorted(rng.sample(range(n_endo), n_agents))
    agents = [endo_names[k] for k in agent_positions]
    return make_model(
        {u: BOOL for u in exo_names},
        {x: BOOL for x in endo_names},
        equations,
        agents,
    )


def random_true_event(
    rng: random.Random, model: CausalModel, actual: dict[str, str]
) -> EventFormula:
    """A primitive event over an endogenous variable that holds in the given
    assignment."""
    name = rng.choice(list(model.endo_names))
    return EqTest(name, actual[name])
