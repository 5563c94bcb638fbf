import json
from pathlib import Path

import pytest

ORACLE_DIR = Path(__file__).parent / "oracle"


@pytest.fixture(scope="session")
def bessel_oracle():
    with open(ORACLE_DIR / "frozen_bessel.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def spectrum_oracle():
    with open(ORACLE_DIR / "frozen_spectrum.json") as fh:
        return json.load(fh)


def rel_err(got, want, floor=1e-300):
    return abs(got - want) / max(abs(want), floor)
