import numpy as np
import pytest

from bfw import BFWParams, Dataset, FWParams, ingest

# Estimates published for the bundled pump data.  The four-parameter row is
# stated in the data's own units (thousands of hours); the two-parameter
# rows of the same published analysis are stated in hundreds of hours.
PUBLISHED_BFW = (0.052, 0.024, 35.077, 20.328)
PUBLISHED_FW = (0.0207, 2.5875)


@pytest.fixture(scope="session")
def pumps() -> Dataset:
    return ingest("pumps")


@pytest.fixture(scope="session")
def pumps_hundreds(pumps) -> Dataset:
    return Dataset(times=pumps.times * 10.0, label="pumps-hundreds-of-hours")


@pytest.fixture(scope="session")
def published_params() -> BFWParams:
    return BFWParams(*PUBLISHED_BFW)


@pytest.fixture(scope="session")
def published_fw() -> FWParams:
    return FWParams(*PUBLISHED_FW)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20250810)
