import warnings

import pytest
from hypothesis import given
import hypothesis.strategies as st

import oracle
from model_strategies import models_with_context
from causalcgs.causality import (
    CandidateCause,
    CausalityError,
    CauseCertificate,
    Witness,
    check_cause,
    dependence_with_witness,
    enumerate_causes,
    is_butfor_cause,
)
from causalcgs.model import (
    BOOL,
    And,
    EqTest,
    Not,
    Or,
    Var,
    evaluate,
    make_model,
    satisfies,
)

B = BOOL
NO_COLLISION = Not(EqTest("Col", "1"))


def _candidate(model, context, *names):
    actual = evaluate(model, context)
    return CandidateCause(tuple(names), tuple(actual[v] for v in names))


def test_butfor_causes_of_no_collision(vehicle, vehicle_context):
    assert is_butfor_cause(vehicle, vehicle_context, _candidate(vehicle, vehicle_context, "ODS"), NO_COLLISION) == ("0",)
    assert is_butfor_cause(vehicle, vehicle_context, _candidate(vehicle, vehicle_context, "DA"), NO_COLLISION) == ("1",)
    assert is_butfor_cause(vehicle, vehicle_context, _candidate(vehicle, vehicle_context, "HD"), NO_COLLISION) is None
    assert is_butfor_cause(vehicle, vehicle_context, _candidate(vehicle, vehicle_context, "O"), NO_COLLISION) is None


def test_check_cause_certificate_flips_outcome(vehicle, vehicle_context):
    cert = check_cause(vehicle, vehicle_context, _candidate(vehicle, vehicle_context, "ODS"), NO_COLLISION)
    assert cert is not None
    assert cert.witness.vars == ()
    flipped = evaluate(vehicle, vehicle_context, cert.intervention())
    assert not satisfies(flipped, NO_COLLISION)


def test_nonminimal_pair_rejected(vehicle, vehicle_context):
    pair = _candidate(vehicle, vehicle_context, "ODS", "DA")
    assert check_cause(vehicle, vehicle_context, pair, NO_COLLISION) is None
    # yet the pair does pass the dependence part on its own
    alt = dependence_with_witness(
        vehicle, vehicle_context, pair.vars, Witness((), ()), NO_COLLISION
    )
    assert alt is not None


def test_enumerate_agents_only(vehicle, vehicle_context):
    certs = enumerate_causes(vehicle, vehicle_context, NO_COLLISION, restrict_to_agents=True)
    found = [(c.cause.vars, c.cause.actual_values, c.alternative) for c in certs]
    assert found == [
        (("ODS",), ("1",), ("0",)),
        (("DA",), ("0",), ("1",)),
    ]
    assert all(c.witness.vars == () for c in certs)


def test_enumerate_all_includes_outcome_variable(vehicle, vehicle_context):
    certs = enumerate_causes(vehicle, vehicle_context, NO_COLLISION)
    assert (("Col",), ("0",)) in [(c.cause.vars, c.cause.actual_values) for c in certs]


def test_false_outcome_raises(vehicle, vehicle_context):
    with pytest.raises(CausalityError):
        enumerate_causes(vehicle, vehicle_context, EqTest("Col", "1"))
    # AC1 fails, so single checks return None instead
    cand = _candidate(vehicle, vehicle_context, "DA")
    assert check_cause(vehicle, vehicle_context, cand, EqTest("Col", "1")) is None


def test_tautological_outcome_has_no_causes(vehicle, vehicle_context):
    tautology = Or(EqTest("Col", "0"), Not(EqTest("Col", "0")))
    assert enumerate_causes(vehicle, vehicle_context, tautology) == []


def test_non_endogenous_candidate_rejected(vehicle, vehicle_context):
    with pytest.raises(CausalityError):
        check_cause(
            vehicle,
            vehicle_context,
            CandidateCause(("U_O",), ("1",)),
            NO_COLLISION,
        )


def test_non_actual_candidate_fails_ac1(vehicle, vehicle_context):
    cand = CandidateCause(("DA",), ("1",))  # actually 0
    assert check_cause(vehicle, vehicle_context, cand, NO_COLLISION) is None


def _preemption_model():
    """First thrower hits, blocking the second; the hit needs a witness."""
    return make_model(
        {"U1": B, "U2": B},
        {"ST": B, "BT": B, "SH": B, "BH": B, "BS": B},
        {
            "ST": Var("U1"),
            "BT": Var("U2"),
            "SH": Var("ST"),
            "BH": And(Var("BT"), Not(Var("SH"))),
            "BS": Or(Var("SH"), Var("BH")),
        },
    )


def test_witness_needed_when_backup_would_fire():
    m = _preemption_model()
    ctx = {"U1": "1", "U2": "1"}
    outcome = EqTest("BS", "1")
    cert = check_cause(m, ctx, CandidateCause(("ST",), ("1",)), outcome)
    assert cert is not None
    assert cert.witness.vars == ("BH",)
    assert cert.witness.values == ("0",)
    assert is_butfor_cause(m, ctx, CandidateCause(("ST",), ("1",)), outcome) is None
    # the unblocked thrower is not a cause at all
    assert check_cause(m, ctx, CandidateCause(("BT",), ("1",)), outcome) is None


def test_witness_size_cap_warns():
    m = _preemption_model()
    ctx = {"U1": "1", "U2": "1"}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cert = check_cause(
            m, ctx, CandidateCause(("ST",), ("1",)), EqTest("BS", "1"), max_witness_size=0
        )
    assert cert is None
    assert any("truncated" in str(w.message) for w in caught)


def test_enumeration_order_is_size_then_declaration():
    # two independent switches, conjunction outcome: both are singleton causes
    m = make_model(
        {"U": B},
        {"S1": B, "S2": B, "L": B},
        {"S1": Var("U"), "S2": Var("U"), "L": And(Var("S1"), Var("S2"))},
    )
    certs = enumerate_causes(m, {"U": "1"}, EqTest("L", "1"))
    assert [c.cause.vars for c in certs] == [("S1",), ("S2",), ("L",)]


def test_all_witnesses_variant(vehicle, vehicle_context):
    certs = enumerate_causes(
        vehicle, vehicle_context, NO_COLLISION, restrict_to_agents=True, all_witnesses=True
    )
    by_cause = {}
    for c in certs:
        by_cause.setdefault(c.cause.vars, []).append(c.witness.vars)
    # ODS=1 also works with any witness that keeps DA's inputs pinned
    assert () in by_cause[("ODS",)]
    assert len(by_cause[("ODS",)]) > 1


@given(models_with_context())
def test_enumeration_matches_literal_oracle(mc):
    model, context = mc
    actual = evaluate(model, context)
    name = model.endo_names[-1]
    outcome = EqTest(name, actual[name])
    got = {c.cause.vars for c in enumerate_causes(model, context, outcome)}
    want = {vars_ for vars_, _, _ in oracle.literal_causes(model, context, outcome)}
    assert got == want


@given(models_with_context(), st.data())
def test_certificates_verify_against_oracle(mc, data):
    model, context = mc
    actual = evaluate(model, context)
    name = data.draw(st.sampled_from(list(model.endo_names)))
    outcome = EqTest(name, actual[name])
    try:
        certs = enumerate_causes(model, context, outcome)
    except CausalityError:
        return
    for cert in certs:
        alt = oracle.literal_ac12(model, context, cert.cause.vars, cert.witness.vars, outcome)
        assert alt is not None
