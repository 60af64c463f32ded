import json
from pathlib import Path

import pytest

from ptob import CapLayout, ChassisConfig, WheelGeometry

DATA = Path(__file__).resolve().parents[1] / "src" / "ptob" / "data" / "prototype.json"


@pytest.fixture(scope="session")
def prototype() -> WheelGeometry:
    return WheelGeometry.from_json(DATA.read_text())


@pytest.fixture(scope="session")
def prototype_dict() -> dict:
    return json.loads(DATA.read_text())


@pytest.fixture(scope="session")
def layout(prototype) -> CapLayout:
    return CapLayout.from_geometry(prototype)


@pytest.fixture(scope="session")
def chassis(prototype) -> ChassisConfig:
    return ChassisConfig(geom=prototype)


@pytest.fixture(scope="session")
def table2_cells(prototype) -> dict:
    """Max climbable step on the 5 mm grid per (s_max, phase) cell.

    Computed once; shared by the step-climb tests and the acceptance suite.
    """
    from ptob.stepclimb import max_step

    return {
        (s, phase): max_step(prototype, s_max=s, phase_diff=phase)
        for s in (0.0, 15.0, 30.0)
        for phase in (0.0, 60.0)
    }
