import pytest

from subdyn.corpus import (GridParams, build_diagonal_family, build_diamond_open_dynamics,
                           build_grid_source, build_grid_timeless, build_grid_why_family,
                           build_two_branch_line, interval_functions)
from subdyn.generate import canonical_family


@pytest.fixture(scope="session")
def diamond():
    return build_diamond_open_dynamics()


@pytest.fixture(scope="session")
def diamond_family(diamond):
    return canonical_family(diamond)


@pytest.fixture(scope="session")
def two_branch():
    return build_two_branch_line(3)


@pytest.fixture(scope="session")
def grid_source():
    return build_grid_source(GridParams(3, 1))


@pytest.fixture(scope="session")
def grid_timeless():
    return build_grid_timeless(interval_functions(1, 2, range(-1, 2)))


@pytest.fixture(scope="session")
def why_family():
    return build_grid_why_family(GridParams(3, 1))


@pytest.fixture(scope="session")
def diagonal():
    return build_diagonal_family()
