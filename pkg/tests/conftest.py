"""Shared pytest settings and fixtures."""


import os

import numpy as np
import pytest
import matplotlib

matplotlib.use("Agg")

from OPFRM.simulate import SimulationScenario, generate_dataset  # noqa: E402
from OPFRM.core.data import OrdinalFunctionalDataset  # noqa: E402
from OPFRM.core.random import rng_stream  # noqa: E402
from OPFRM.core.library import initialize_library  # noqa: E402


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="Run desk-scale simulation studies.",
    )


def pytest_configure(config):
    """
    Points the library at the test library and registers the `slow` marker.
    """

    test_dir = os.path.split(os.path.abspath(__file__))[0]
    pytest.library = os.path.join(test_dir, "data", "library")
    initialize_library(pytest.library)

    config.addinivalue_line("markers", "slow: desk-scale study")


def pytest_collection_modifyitems(config, items):

    if config.getoption("--runslow"):
        return

    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture()
def rng():

    return rng_stream(1234, 0)


@pytest.fixture()
def small_scenario():

    return SimulationScenario(
        "sigmoidal",
        "exponential",
        n_subjects=30,
        n_timepoints=32,
        n_replicates=2,
        seed=7,
    )


@pytest.fixture()
def small_data(small_scenario):

    data, truth = generate_dataset(small_scenario, rng_stream(7, 0))
    return data


@pytest.fixture()
def tiny_data():

    outcomes = np.array(
        [
            [0, 1, 2, 3, 2, 1, 0, 1],
            [1, 1, 2, 2, 3, 3, 2, 1],
            [0, 0, 1, 1, 2, 2, 3, 3],
            [3, 2, 1, 0, 0, 1, 2, 3],
            [2, 2, 2, 1, 1, 0, 0, 0],
            [1, 2, 3, 3, 2, 1, 0, 0],
        ]
    )
    covariates = np.array([[0.5], [-1.0], [1.5], [0.2], [-0.7], [0.9]])
    return OrdinalFunctionalDataset(
        outcomes, covariates, np.arange(1, 9, dtype=float), 4
    )


@pytest.fixture()
def fast_spline():

    return {
        "model": {
            "basis": "ospline",
            "basis_size": 2,
            "n_samples": 60,
            "n_burn": 30,
            "seed": 3,
        }
    }


@pytest.fixture()
def fast_wavelet():

    return {
        "model": {
            "basis": "symmlet",
            "basis_size": 2,
            "vanishing_moments": 2,
            "n_samples": 60,
            "n_burn": 30,
            "seed": 3,
        }
    }
