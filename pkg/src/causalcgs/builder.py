"""Tree-shaped game structures built from a causal setting.

Agents act in rank order: at depth i exactly the agents of rank i+1 pick a
value from their variable's domain while everyone else plays NO_OP. A state
q_{i,j} encodes the joint choices so far through its breadth index j, and
its label is the full assignment obtained by forcing those choices as an
intervention. Maximal-depth states loop back to themselves.

An optional generating intervention bakes extra forced values into every
label (and into the dependency structure used for ranking), so the game for
an already-intervened setting comes out of the same code path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Optional, Sequence
from weakref import WeakKeyDictionary

from .cgs import NO_OP, Cgs, Move
from .graph import AgentRanking, agent_ranking, build_network, variable_levels
from .model import (
    CausalModel,
    Context,
    Intervention,
    ModelError,
    Value,
    VariableId,
    evaluate,
    intervened_model,
    validate_context,
    validate_model,
)


class BuilderError(ModelError):
    pass


class SizeBoundError(BuilderError):
    pass


@dataclass(frozen=True, order=True)
class StateIndex:
    i: int  # rank depth, 0 at the root
    j: int  # breadth index, 0 <= j < m_i

    def name(self) -> str:
        return f"q_{self.i}_{self.j}"

    def __str__(self) -> str:
        return f"q_{{{self.i},{self.j}}}"


ActionPath = tuple[tuple[VariableId, Value], ...]


@dataclass(frozen=True)
class Origin:
    model: CausalModel
    context: Mapping[VariableId, Value]
    intervention: Mapping[VariableId, Value]


@dataclass(frozen=True)
class CausalCgs:
    base: Cgs
    ranking: AgentRanking
    agents: tuple[VariableId, ...]
    origin: Origin
    parent: Mapping[StateIndex, tuple[StateIndex, tuple[Move, ...]]]
    children: Mapping[StateIndex, tuple[tuple[tuple[Move, ...], StateIndex], ...]]
    assignments: Mapping[StateIndex, Mapping[VariableId, Value]]
    accumulated: Mapping[StateIndex, Mapping[VariableId, Value]]
    structural_model: CausalModel  # the generating intervention applied

    @property
    def root(self) -> StateIndex:
        return StateIndex(0, 0)

    @property
    def states(self) -> tuple[StateIndex, ...]:
        return self.base.states  # type: ignore[return-value]

    @property
    def n_max(self) -> int:
        return self.ranking.n_max

    @property
    def rank_of_agent(self) -> dict[VariableId, int]:
        return {a: self.ranking.rho[a] for a in self.agents}

    @property
    def leaves(self) -> tuple[StateIndex, ...]:
        return tuple(q for q in self.states if q.i == self.n_max)

    def descendants(self, state: StateIndex) -> set[StateIndex]:
        """States reachable in one or more steps (a leaf reaches itself)."""
        seen: set[StateIndex] = set()
        frontier = [child for _, child in self.children[state]]
        while frontier:
            q = frontier.pop()
            if q in seen:
                continue
            seen.add(q)
            frontier.extend(child for _, child in self.children[q] if child not in seen)
        return seen


def _agents_by_rank(ranking: AgentRanking, model: CausalModel) -> dict[int, tuple[VariableId, ...]]:
    out: dict[int, tuple[VariableId, ...]] = {}
    for rank in range(1, ranking.n_max + 1):
        out[rank] = tuple(a for a in model.agents_in_order if ranking.rho[a] == rank)
    return out


def _breadths(ranking: AgentRanking, model: CausalModel) -> list[int]:
    """m_0..m_n: number of states per depth; m_i multiplies the domain sizes
    of all agents with rank at most i."""
    by_rank = _agents_by_rank(ranking, model)
    ms = [1]
    for rank in range(1, ranking.n_max + 1):
        step = reduce(lambda acc, a: acc * len(model.domain[a]), by_rank[rank], 1)
        ms.append(ms[-1] * step)
    return ms


def build_states(ranking: AgentRanking, model: CausalModel) -> tuple[StateIndex, ...]:
    ms = _breadths(ranking, model)
    states = [StateIndex(0, 0)]
    for depth in range(1, ranking.n_max + 1):
        states.extend(StateIndex(depth, j) for j in range(ms[depth]))
    return tuple(states)


def moves_at(
    ranking: AgentRanking, model: CausalModel, state: StateIndex, agent: VariableId
) -> tuple[Move, ...]:
    """The agent's domain when its rank is up next, else only NO_OP."""
    if ranking.rho[agent] == state.i + 1:
        return tuple(model.domain[agent])
    return (NO_OP,)


def transition(
    ranking: AgentRanking,
    model: CausalModel,
    state: StateIndex,
    vector: Sequence[Move],
) -> StateIndex:
    """Child index: j' = j * b_i + (lexicographic index of the acting
    agents' values, agents in declaration order, values in domain order).
    Maximal-depth states map back to themselves."""
    agents = model.agents_in_order
    if len(vector) != len(agents):
        raise BuilderError(f"move vector has {len(vector)} entries for {len(agents)} agents")
    for agent, move in zip(agents, vector):
        if move not in moves_at(ranking, model, state, agent):
            raise BuilderError(f"illegal move {move!r} for {agent} at {state}")
    if state.i == ranking.n_max:
        return state
    acting = [a for a in agents if ranking.rho[a] == state.i + 1]
    index = 0
    branching = 1
    for agent in acting:
        domain = model.domain[agent]
        move = vector[agents.index(agent)]
        index = index * len(domain) + domain.index(move)
        branching *= len(domain)
    return StateIndex(state.i + 1, state.j * branching + index)


_CGS_CACHE: "WeakKeyDictionary[CausalModel, dict]" = WeakKeyDictionary()


def build_causal_cgs(
    model: CausalModel,
    context: Context,
    generating: Optional[Intervention] = None,
) -> CausalCgs:
    """Assemble states, moves, transitions, and labels for a setting."""
    generating = dict(generating or {})
    per_model = _CGS_CACHE.setdefault(model, {})
    key = (tuple(sorted(context.items())), tuple(sorted(generating.items())))
    hit = per_model.get(key)
    if hit is not None:
        return hit

    diags = validate_model(model) + validate_context(model, context)
    if diags:
        raise BuilderError("; ".join(str(d) for d in diags))
    endo = set(model.endo_names)
    for name, value in generating.items():
        if name not in endo:
            raise BuilderError(f"generating intervention targets non-endogenous variable {name}")
        if value not in model.domain[name]:
            raise BuilderError(f"generating intervention value {name}={value!r} out of domain")

    structural = intervened_model(model, generating)
    levels = variable_levels(build_network(structural), structural)
    ranking = agent_ranking(structural, levels)
    agents = model.agents_in_order
    states = build_states(ranking, model)

    moves: dict[tuple[VariableId, StateIndex], tuple[Move, ...]] = {}
    for state in states:
        for agent in agents:
            moves[(agent, state)] = moves_at(ranking, model, state, agent)

    transitions: dict[tuple[StateIndex, tuple[Move, ...]], StateIndex] = {}
    parent: dict[StateIndex, tuple[StateIndex, tuple[Move, ...]]] = {}
    children: dict[StateIndex, list[tuple[tuple[Move, ...], StateIndex]]] = {q: [] for q in states}
    for state in states:
        for vector in itertools.product(*(moves[(a, state)] for a in agents)):
            target = transition(ranking, model, state, vector)
            transitions[(state, vector)] = target
            children[state].append((vector, target))
            if target != state:
                parent[target] = (state, vector)

    accumulated: dict[StateIndex, dict[VariableId, Value]] = {StateIndex(0, 0): {}}
    assignments: dict[StateIndex, dict[VariableId, Value]] = {}
    for state in states:  # parents precede children in depth order
        if state != StateIndex(0, 0):
            prev, vector = parent[state]
            acc = dict(accumulated[prev])
            acc.update(
                (agent, move)
                for agent, move in zip(agents, vector)
                if move is not NO_OP
            )
            accumulated[state] = acc
        assignments[state] = evaluate(model, context, {**generating, **accumulated[state]})

    all_vars = model.exo_names + model.endo_names
    propositions = frozenset(
        (v, value) for v in all_vars for value in model.domain[v]
    )
    labels = {
        state: frozenset((v, assignments[state][v]) for v in all_vars)
        for state in states
    }

    built = CausalCgs(
        base=Cgs(
            agents=agents,
            states=states,
            moves=moves,
            transition=transitions,
            propositions=propositions,
            labels=labels,
        ),
        ranking=ranking,
        agents=agents,
        origin=Origin(model=model, context=dict(context), intervention=generating),
        parent=parent,
        children={q: tuple(edges) for q, edges in children.items()},
        assignments=assignments,
        accumulated=accumulated,
        structural_model=structural,
    )
    per_model[key] = built
    return built


def label_states(
    model: CausalModel,
    context: Context,
    generating_intervention: Optional[Intervention] = None,
) -> dict[StateIndex, dict[VariableId, Value]]:
    """State labels as full assignments (root: just the generating
    intervention; children: plus the accumulated actions)."""
    cgs = build_causal_cgs(model, context, generating_intervention)
    return {q: dict(a) for q, a in cgs.assignments.items()}


def action_path(cgs: CausalCgs, state: StateIndex) -> ActionPath:
    """All non-NO_OP actions along the unique root path, in acting order."""
    steps: list[tuple[VariableId, Value]] = []
    q = state
    while q != cgs.root:
        prev, vector = cgs.parent[q]
        taken = [
            (agent, move)
            for agent, move in zip(cgs.agents, vector)
            if move is not NO_OP
        ]
        steps = taken + steps
        q = prev
    return tuple(steps)


def corresponds(
    state_label: Mapping[VariableId, Value],
    model: CausalModel,
    context: Context,
    intervention: Intervention,
) -> bool:
    """Variable-by-variable agreement with the intervened setting's values."""
    target = evaluate(intervened_model(model, intervention), context, {})
    return dict(state_label) == target


@dataclass(frozen=True)
class SizeReport:
    states: int
    transitions: int
    leaves: int
    bound: int  # twice the product of the agent domain sizes

    def as_dict(self) -> dict:
        return {
            "states": self.states,
            "transitions": self.transitions,
            "leaves": self.leaves,
            "bound": self.bound,
        }


def size_report(cgs: CausalCgs) -> SizeReport:
    """Counts plus the state bound; raises SizeBoundError when the structure
    exceeds states <= bound + 1 (possible only with degenerate singleton
    domains spread over several ranks)."""
    model = cgs.origin.model
    bound = 2 * reduce(lambda acc, a: acc * len(model.domain[a]), cgs.agents, 1)
    report = SizeReport(
        states=len(cgs.states),
        transitions=len(cgs.base.transition),
        leaves=len(cgs.leaves),
        bound=bound,
    )
    if report.states > bound + 1:
        raise SizeBoundError(f"{report.states} states exceed the bound {bound} + 1")
    return report


# --- whole-structure checks (used by tests and the selftest command) -------

def check_rank_stability(cgs: CausalCgs) -> list[str]:
    """Once a variable's rank has been reached, its labeled value must agree
    across the whole subtree. Returns violation descriptions."""
    problems = []
    rho = cgs.ranking.rho
    for state in cgs.states:
        settled = [v for v in cgs.origin.model.endo_names if rho[v] == state.i]
        if not settled:
            continue
        here = cgs.assignments[state]
        for q in cgs.descendants(state):
            there = cgs.assignments[q]
            for v in settled:
                if there[v] != here[v]:
                    problems.append(
                        f"{v} is {here[v]} at {state} but {there[v]} at descendant {q}"
                    )
    return problems


def check_leaf_correspondence(cgs: CausalCgs) -> list[str]:
    """Every maximal-depth state must agree with the setting intervened by
    its own action path (on top of the generating intervention)."""
    problems = []
    for leaf in cgs.leaves:
        forced = dict(cgs.origin.intervention)
        forced.update(dict(action_path(cgs, leaf)))
        if not corresponds(cgs.assignments[leaf], cgs.origin.model, cgs.origin.context, forced):
            problems.append(f"leaf {leaf} does not match its action-path intervention")
    return problems


def check_transition_injectivity(cgs: CausalCgs) -> list[str]:
    problems = []
    for state in cgs.states:
        if state.i == cgs.n_max:
            continue
        targets = [child for _, child in cgs.children[state]]
        if len(targets) != len(set(targets)):
            problems.append(f"distinct vectors at {state} share a target")
    return problems


def check_child_ranges(cgs: CausalCgs) -> list[str]:
    problems = []
    for state in cgs.states:
        if state.i == cgs.n_max:
            continue
        width = len(cgs.children[state])
        for _, child in cgs.children[state]:
            low, high = state.j * width, state.j * width + width - 1
            if not (low <= child.j <= high):
                problems.append(f"child {child} of {state} outside [{low}, {high}]")
    return problems


def check_tree_shape(cgs: CausalCgs) -> list[str]:
    problems = []
    non_roots = [q for q in cgs.states if q != cgs.root]
    for q in non_roots:
        if q not in cgs.parent:
            problems.append(f"{q} is unreachable")
    incoming: dict[StateIndex, int] = {}
    for (state, _vec), target in cgs.base.transition.items():
        if target != state:
            incoming[target] = incoming.get(target, 0) + 1
    for q, count in incoming.items():
        if count > 1:
            problems.append(f"{q} has {count} incoming edges")
    return problems
