import json
import os

import pytest

from codrisk.copula import FGM, Gumbel, Independence
from codrisk.marginal import Gamma, Normal
from codrisk.riskcore import BivariateModel


@pytest.fixture
def load_fixture_json():
    """Load a JSON fixture file from the tests/fixtures directory."""

    def _load(path: str):
        base_path = os.path.join(os.path.dirname(__file__), "fixtures")
        full_path = os.path.join(base_path, path)
        with open(full_path, encoding="utf-8") as f:
            return json.load(f)

    return _load


@pytest.fixture
def reference_values(load_fixture_json):
    """Reference numbers shared by several test modules."""
    return load_fixture_json("reference_values.json")


@pytest.fixture
def gumbel_normal_model():
    """Gumbel(2) coupling two standard normal risks."""
    return BivariateModel(Gumbel(2.0), Normal(0.0, 1.0), Normal(0.0, 1.0))


@pytest.fixture
def independent_normal_model():
    """Independent standard normal risks."""
    return BivariateModel(Independence(), Normal(0.0, 1.0), Normal(0.0, 1.0))


@pytest.fixture
def fgm_gamma_model():
    """Negatively dependent gamma risks under FGM(-0.8)."""
    return BivariateModel(FGM(-0.8), Gamma(0.8, 1.0), Gamma(0.8, 0.5))
