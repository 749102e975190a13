import os

import pytest
from hypothesis import settings

from causalcgs import build_causal_cgs, make_model
from causalcgs.dsl import parse_checked
from causalcgs.model import And, Not, Or, Var

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

VEHICLE_PATH = os.path.join(os.path.dirname(__file__), "..", "models", "vehicle.scm")


def vehicle_model():
    """The semi-automated vehicle model, built in code."""
    b = ("0", "1")
    return make_model(
        {"U_O": b, "U_Att": b},
        {"O": b, "Att": b, "HD": b, "ODS": b, "DA": b, "Col": b},
        {
            "O": Var("U_O"),
            "Att": Var("U_Att"),
            "HD": Or(Not(Var("O")), And(Var("O"), Not(Var("Att")))),
            "ODS": Var("O"),
            "DA": And(Var("HD"), Not(Var("ODS"))),
            "Col": And(And(Var("DA"), Var("HD")), Var("O")),
        },
        agents=("HD", "ODS", "DA"),
    )


VEHICLE_CONTEXT = {"U_O": "1", "U_Att": "0"}


@pytest.fixture(scope="session")
def vehicle():
    return vehicle_model()


@pytest.fixture(scope="session")
def vehicle_context():
    return dict(VEHICLE_CONTEXT)


@pytest.fixture(scope="session")
def vehicle_doc():
    with open(VEHICLE_PATH, "r", encoding="utf-8") as handle:
        return parse_checked(handle.read())


@pytest.fixture(scope="session")
def vehicle_cgs(vehicle):
    return build_causal_cgs(vehicle, VEHICLE_CONTEXT, {})
