"""
Desk-scale simulation studies. Run with `pytest --runslow`.
"""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import os
import filecmp

import numpy as np
import pytest

from OPFRM.manager import FitManager
from OPFRM.simulate import SimulationScenario, generate_dataset
from OPFRM.inference import CredibleBand, cross_validate
from OPFRM.parametric import REFERENCE_MODELS, StudyManager
from OPFRM.core.data import OrdinalFunctionalDataset
from OPFRM.core.random import rng_stream

pytestmark = pytest.mark.slow

JOBS = min(4, os.cpu_count() or 1)
CV_MODEL = {
    "model": {
        "basis": "ospline",
        "basis_size": 2,
        "n_samples": 300,
        "n_burn": 150,
    }
}


def _study(setting, models, reps, seed):

    scenario = SimulationScenario(
        setting, "exponential", n_replicates=reps, seed=seed
    )
    study = StudyManager(scenario, models, jobs=JOBS)
    study.run()
    return study


def _table(study):
    return study.table().set_index("model")


def test_sigmoidal_recovery():

    table = _table(_study("sigmoidal", ["ospline_k2"], 20, 11))

    assert table.loc["ospline_K2", "n_failed"] == 0
    assert table.loc["ospline_K2", "mise"] <= 0.01


def test_seasonal_knot_ordering():

    table = _table(_study("seasonal", ["bspline_k5", "bspline_k10"], 20, 12))
    assert table.loc["bspline_K10", "mise"] < table.loc["bspline_K5", "mise"]


def test_band_coverage():

    models = ["ospline_k4", "symmlet_j6", "bspline_k5"]
    table = _table(_study("sigmoidal", models, 50, 13))

    assert table.loc["ospline_K4", "coverage_joint"] >= 0.93
    assert table.loc["symmlet_J6", "coverage_joint"] >= 0.93
    assert table.loc["bspline_K5", "coverage_pw"] <= 0.90


@pytest.mark.parametrize("model", REFERENCE_MODELS)
def test_band_structure(model):

    scenario = SimulationScenario("sigmoidal", "exponential", seed=14)
    data, _ = generate_dataset(scenario, rng_stream(14, 0))

    manager = FitManager({"model": model}, data=data)
    draws = manager.run()

    for p in range(draws.P):
        band = CredibleBand.from_draws(draws.beta_draws[:, p, :])

        assert np.all(band.joint_lower <= band.pw_lower)
        assert np.all(band.pw_upper <= band.joint_upper)
        assert not np.any(band.sig_joint & ~band.sig_pw)


def test_null_safety():

    table = _table(_study("null", ["ospline_k2"], 20, 15))
    assert table.loc["ospline_K2", "any_sig_joint"] <= 0.10


def test_cv_strong_signal():

    scenario = SimulationScenario(
        "sigmoidal",
        "independent",
        n_subjects=60,
        n_timepoints=64,
        amplitude=3.0,
        seed=16,
    )
    data, _ = generate_dataset(scenario, rng_stream(16, 0))
    result = cross_validate(data, CV_MODEL, 6, rng_stream(16, 1), jobs=JOBS)

    assert result.overall >= 0.40


def test_cv_pure_noise():

    rng = rng_stream(17, 0)
    data = OrdinalFunctionalDataset(
        rng.integers(0, 4, size=(60, 64)),
        rng.standard_normal((60, 1)),
        np.arange(1, 65, dtype=float),
        4,
    )
    result = cross_validate(data, CV_MODEL, 6, rng_stream(17, 1), jobs=JOBS)

    assert result.overall == pytest.approx(0.25, abs=0.05)


def test_study_outputs_reproducible(tmp_path):

    for name in ("a", "b"):
        study = _study("sigmoidal", ["ospline_k2"], 4, 18)
        study.save(str(tmp_path / name))

    for name in (
        "study_table.csv",
        "study_summary.csv",
        "study_runs.csv",
        "study_manifest.json",
    ):
        assert filecmp.cmp(
            tmp_path / "a" / name, tmp_path / "b" / name, shallow=False
        )


def test_cv_reproducible():

    scenario = SimulationScenario(
        "sigmoidal", "independent", n_subjects=30, n_timepoints=32, seed=19
    )
    data, _ = generate_dataset(scenario, rng_stream(19, 0))

    a = cross_validate(data, CV_MODEL, 3, rng_stream(19, 1), jobs=JOBS)
    b = cross_validate(data, CV_MODEL, 3, rng_stream(19, 1))

    assert np.array_equal(a.assignment, b.assignment)
    assert a.folds.equals(b.folds)
