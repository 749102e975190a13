import pytest
from hypothesis import given

from model_strategies import models_with_context
from causalcgs.builder import (
    BuilderError,
    SizeBoundError,
    StateIndex,
    action_path,
    build_causal_cgs,
    build_states,
    check_child_ranges,
    check_leaf_correspondence,
    check_rank_stability,
    check_transition_injectivity,
    check_tree_shape,
    corresponds,
    label_states,
    moves_at,
    size_report,
    transition,
)
from causalcgs.cgs import NO_OP, legal_move_vectors
from causalcgs.graph import agent_ranking, build_network, variable_levels
from causalcgs.model import BOOL, Const, EqTest, Ite, Var, evaluate, make_model

B = BOOL


def q(i, j):
    return StateIndex(i, j)


def _bools(assignment, names):
    return {v: assignment[v] for v in names}


ENDO = ("O", "Att", "HD", "ODS", "DA", "Col")


def test_state_index_naming():
    assert q(1, 2).name() == "q_1_2"
    assert str(q(1, 2)) == "q_{1,2}"
    assert q(0, 0) < q(1, 0) < q(1, 1) < q(2, 0)


def test_vehicle_state_set(vehicle_cgs):
    expected = [q(0, 0)] + [q(1, j) for j in range(4)] + [q(2, j) for j in range(8)]
    assert list(vehicle_cgs.states) == expected


def test_vehicle_root_transitions(vehicle_cgs):
    # vector order (HD, ODS, DA); DA idles at the root
    t = vehicle_cgs.base.transition
    assert t[(q(0, 0), ("0", "0", NO_OP))] == q(1, 0)
    assert t[(q(0, 0), ("0", "1", NO_OP))] == q(1, 1)
    assert t[(q(0, 0), ("1", "0", NO_OP))] == q(1, 2)
    assert t[(q(0, 0), ("1", "1", NO_OP))] == q(1, 3)


def test_vehicle_mid_transitions(vehicle_cgs):
    t = vehicle_cgs.base.transition
    for j in range(4):
        assert t[(q(1, j), (NO_OP, NO_OP, "0"))] == q(2, 2 * j)
        assert t[(q(1, j), (NO_OP, NO_OP, "1"))] == q(2, 2 * j + 1)


def test_vehicle_leaf_self_loops(vehicle_cgs):
    t = vehicle_cgs.base.transition
    loop = (NO_OP, NO_OP, NO_OP)
    for j in range(8):
        assert t[(q(2, j), loop)] == q(2, j)
    assert len(t) == 20


def test_vehicle_root_label(vehicle_cgs):
    assert _bools(vehicle_cgs.assignments[q(0, 0)], ENDO) == {
        "O": "1", "Att": "0", "HD": "1", "ODS": "1", "DA": "0", "Col": "0",
    }


def test_vehicle_mid_labels(vehicle_cgs):
    a = vehicle_cgs.assignments
    assert _bools(a[q(1, 0)], ENDO) == {
        "O": "1", "Att": "0", "HD": "0", "ODS": "0", "DA": "0", "Col": "0",
    }
    assert _bools(a[q(1, 2)], ENDO) == {
        "O": "1", "Att": "0", "HD": "1", "ODS": "0", "DA": "1", "Col": "1",
    }
    assert _bools(a[q(2, 1)], ENDO) == {
        "O": "1", "Att": "0", "HD": "0", "ODS": "0", "DA": "1", "Col": "0",
    }


def test_vehicle_leaf_labels(vehicle_cgs):
    got = [
        tuple(vehicle_cgs.assignments[q(2, j)][v] for v in ("HD", "ODS", "DA", "Col"))
        for j in range(8)
    ]
    assert got == [
        ("0", "0", "0", "0"),
        ("0", "0", "1", "0"),
        ("0", "1", "0", "0"),
        ("0", "1", "1", "0"),
        ("1", "0", "0", "0"),
        ("1", "0", "1", "1"),
        ("1", "1", "0", "0"),
        ("1", "1", "1", "1"),
    ]
    for j in range(8):
        assert _bools(vehicle_cgs.assignments[q(2, j)], ("O", "Att")) == {"O": "1", "Att": "0"}


def test_vehicle_size_report(vehicle_cgs):
    rep = size_report(vehicle_cgs)
    assert rep.as_dict() == {"states": 13, "transitions": 20, "leaves": 8, "bound": 16}


def test_vehicle_propositions(vehicle, vehicle_cgs):
    assert ("Col", "1") in vehicle_cgs.base.propositions
    assert ("U_O", "0") in vehicle_cgs.base.propositions
    for state in vehicle_cgs.states:
        assert vehicle_cgs.base.labels[state] <= vehicle_cgs.base.propositions


def test_vehicle_checks_clean(vehicle_cgs):
    assert check_rank_stability(vehicle_cgs) == []
    assert check_leaf_correspondence(vehicle_cgs) == []
    assert check_transition_injectivity(vehicle_cgs) == []
    assert check_child_ranges(vehicle_cgs) == []
    assert check_tree_shape(vehicle_cgs) == []


def test_action_path(vehicle_cgs):
    assert action_path(vehicle_cgs, q(0, 0)) == ()
    assert action_path(vehicle_cgs, q(1, 2)) == (("HD", "1"), ("ODS", "0"))
    assert action_path(vehicle_cgs, q(2, 5)) == (("HD", "1"), ("ODS", "0"), ("DA", "1"))


def test_corresponds(vehicle, vehicle_context, vehicle_cgs):
    label = vehicle_cgs.assignments[q(2, 6)]
    assert corresponds(label, vehicle, vehicle_context, {})
    label5 = vehicle_cgs.assignments[q(2, 5)]
    assert corresponds(label5, vehicle, vehicle_context, {"HD": "1", "ODS": "0", "DA": "1"})
    assert not corresponds(label5, vehicle, vehicle_context, {})


def test_moves_at_standalone(vehicle):
    net = build_network(vehicle)
    ranking = agent_ranking(vehicle, variable_levels(net, vehicle))
    assert moves_at(ranking, vehicle, q(0, 0), "HD") == ("0", "1")
    assert moves_at(ranking, vehicle, q(0, 0), "DA") == (NO_OP,)
    assert moves_at(ranking, vehicle, q(1, 0), "DA") == ("0", "1")
    assert moves_at(ranking, vehicle, q(2, 0), "DA") == (NO_OP,)
    assert build_states(ranking, vehicle) == tuple(
        [q(0, 0)] + [q(1, j) for j in range(4)] + [q(2, j) for j in range(8)]
    )


def test_transition_rejects_bad_vectors(vehicle):
    net = build_network(vehicle)
    ranking = agent_ranking(vehicle, variable_levels(net, vehicle))
    with pytest.raises(BuilderError):
        transition(ranking, vehicle, q(0, 0), ("0", "0"))
    with pytest.raises(BuilderError):
        transition(ranking, vehicle, q(0, 0), ("0", "0", "1"))  # DA must idle
    with pytest.raises(BuilderError):
        transition(ranking, vehicle, q(0, 0), (NO_OP, "0", NO_OP))  # HD must act


def test_generating_intervention_shapes_labels(vehicle, vehicle_context):
    frozen = build_causal_cgs(vehicle, vehicle_context, {"HD": "1"})
    # freezing HD pulls it to level 1, splitting the agents over three ranks
    assert frozen.n_max == 3
    assert frozen.ranking.rho["HD"] == 1
    assert frozen.ranking.rho["ODS"] == 2
    assert frozen.ranking.rho["DA"] == 3
    assert len(frozen.states) == 15
    # the accumulated action overrides the generating intervention
    root_children = dict(frozen.children[frozen.root])
    label0 = frozen.assignments[frozen.base.transition[(frozen.root, ("0", NO_OP, NO_OP))]]
    assert label0["HD"] == "0"


def test_label_states_wrapper(vehicle, vehicle_context, vehicle_cgs):
    labels = label_states(vehicle, vehicle_context)
    assert labels[q(0, 0)] == dict(vehicle_cgs.assignments[q(0, 0)])
    labels[q(0, 0)]["Col"] = "tampered"
    assert label_states(vehicle, vehicle_context)[q(0, 0)]["Col"] == "0"


def test_size_bound_error_on_singleton_chain():
    m = make_model(
        {"U": B},
        {"X1": ("a",), "X2": ("b",), "X3": ("c",)},
        {
            "X1": Const("a"),
            "X2": Ite(EqTest("X1", "a"), Const("b"), Const("b")),
            "X3": Ite(EqTest("X2", "b"), Const("c"), Const("c")),
        },
        agents=("X1", "X2", "X3"),
    )
    cgs = build_causal_cgs(m, {"U": "0"}, {})
    assert len(cgs.states) == 4
    with pytest.raises(SizeBoundError):
        size_report(cgs)


def test_build_rejects_invalid_inputs(vehicle):
    with pytest.raises(BuilderError):
        build_causal_cgs(vehicle, {"U_O": "1"}, {})
    with pytest.raises(BuilderError):
        build_causal_cgs(vehicle, {"U_O": "1", "U_Att": "0"}, {"U_O": "0"})


def test_build_is_memoized(vehicle, vehicle_context, vehicle_cgs):
    again = build_causal_cgs(vehicle, dict(vehicle_context), {})
    assert again is vehicle_cgs


@given(models_with_context())
def test_built_structures_satisfy_invariants(mc):
    model, context = mc
    cgs = build_causal_cgs(model, context, {})
    rep = size_report(cgs)
    assert rep.states == len(cgs.states)
    assert rep.states <= rep.bound + 1
    assert check_rank_stability(cgs) == []
    assert check_leaf_correspondence(cgs) == []
    assert check_transition_injectivity(cgs) == []
    assert check_child_ranges(cgs) == []
    assert check_tree_shape(cgs) == []


@given(models_with_context())
def test_root_label_is_plain_evaluation(mc):
    model, context = mc
    cgs = build_causal_cgs(model, context, {})
    assert cgs.assignments[cgs.root] == evaluate(model, context)


@given(models_with_context())
def test_descendants_cover_tree(mc):
    model, context = mc
    cgs = build_causal_cgs(model, context, {})
    below_root = set(cgs.descendants(cgs.root))
    assert below_root == set(cgs.states) - {cgs.root}
    for leaf in cgs.leaves:
        assert set(cgs.descendants(leaf)) == {leaf}


@given(models_with_context())
def test_legal_vectors_match_children(mc):
    model, context = mc
    cgs = build_causal_cgs(model, context, {})
    for state in cgs.states:
        vectors = list(legal_move_vectors(cgs.base, state))
        if state.i == cgs.n_max:
            assert vectors == [tuple(NO_OP for _ in cgs.agents)]
        else:
            assert vectors == [vec for vec, _ in cgs.children[state]]
