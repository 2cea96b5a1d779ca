import sys
from pathlib import Path

import pytest

from layersem.fixtures import all_fixtures
from layersem.generate import Bounds, random_configuration

sys.path.insert(0, str(Path(__file__).parent))

POPULATION_SEEDS = range(500)
POPULATION_BOUNDS = Bounds(layers=3, ports=2, type_size=2)
# (2 ** |4 output valuations|) ** |4 input valuations| covers every layer in the population.
POPULATION_TABLE_BUDGET = 2**16


@pytest.fixture(scope="session")
def fixtures_list():
    return all_fixtures()


@pytest.fixture(scope="session")
def population():
    """``(label, configuration)`` for every fixture and every seeded random configuration."""
    items = [(fx.id, fx.config) for fx in all_fixtures()]
    items += [(f"seed {s}", random_configuration(s, POPULATION_BOUNDS)) for s in POPULATION_SEEDS]
    return items
