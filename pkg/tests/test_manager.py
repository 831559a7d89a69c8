"""Tests for `FitManager`."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import os
import json

import numpy as np
import pandas as pd
import pytest

from OPFRM import FitManager, load_config
from OPFRM.manager import LOG_FILE, CONFIG_FILE, SUMMARY_FILE, write_summary
from OPFRM.samplers import SplineSampler, WaveletSampler
from OPFRM.core.data import write_dataset
from OPFRM.core.draws import META_FILE, PosteriorDraws
from OPFRM.core.model import ModelConfig
from OPFRM.core.library import active_library, initialize_library
from OPFRM.core.exceptions import MissingInputs, SamplerNotFound


@pytest.fixture()
def fitted(small_data, fast_spline):

    manager = FitManager(fast_spline, data=small_data)
    manager.run()
    return manager


def test_run(fitted, small_data):

    draws = fitted.draws
    assert isinstance(draws, PosteriorDraws)
    assert draws.beta_draws.shape == (30, 1, small_data.T)
    assert fitted.runtime >= 0
    assert isinstance(fitted.sampler, SplineSampler)


def test_logs(fitted):

    logs = fitted.logs
    assert isinstance(logs, pd.DataFrame)
    assert list(logs["event"]) == ["initialize", "burn_in", "complete"]


def test_not_run(small_data, fast_spline):

    manager = FitManager(fast_spline, data=small_data)
    with pytest.raises(RuntimeError):
        manager.draws

    with pytest.raises(RuntimeError):
        manager.summarize()


@pytest.mark.parametrize(
    "model",
    (
        ModelConfig("ospline", 2, n_samples=60, n_burn=30),
        {"basis": "ospline", "basis_size": 2},
        "test_fast",
    ),
    ids=["model_config", "dict", "library"],
)
def test_resolve_model(model):

    initialize_library(pytest.library)
    resolved = FitManager.resolve_model(model)

    assert isinstance(resolved, dict)
    assert resolved["basis"] == "ospline"
    assert resolved["basis_size"] == 2


def test_resolve_model_missing():

    with pytest.raises(MissingInputs):
        FitManager.resolve_model(None)


def test_library_model(small_data):

    manager = FitManager(
        {"model": "test_fast"}, data=small_data, library_path=pytest.library
    )
    assert manager.config["model.n_samples"] == 60
    assert manager.sampler_class is SplineSampler


def test_keeps_active_library(small_data):

    initialize_library(pytest.library)
    FitManager({"model": "ospline_k2"}, data=small_data)

    assert active_library() == pytest.library


@pytest.mark.parametrize(
    "config, sampler",
    (
        ({"model": {"basis": "symmlet"}}, WaveletSampler),
        ({"model": {"basis": "bspline"}}, SplineSampler),
        (
            {"model": {"basis": "ospline"}, "sampler": "SplineSampler"},
            SplineSampler,
        ),
    ),
    ids=["symmlet", "bspline", "by_name"],
)
def test_resolve_sampler(config, sampler):

    assert FitManager.resolve_sampler(config) is sampler


@pytest.mark.parametrize(
    "config",
    (
        {"model": {"basis": "fourier"}},
        {"model": {"basis": "ospline"}, "sampler": "GaussSampler"},
    ),
    ids=["basis", "name"],
)
def test_sampler_not_found(config):

    with pytest.raises(SamplerNotFound):
        FitManager.resolve_sampler(config)


def test_register_sampler(monkeypatch, small_data, fast_spline):

    monkeypatch.setattr(FitManager, "_samplers", FitManager._samplers)

    class CustomSampler(SplineSampler):
        bases = ("ospline",)

    FitManager.register_sampler(CustomSampler)
    assert "CustomSampler" in FitManager.sampler_dict()

    manager = FitManager(fast_spline, data=small_data)
    assert manager.sampler_class is CustomSampler

    config = {"model": {"basis": "bspline"}}
    assert FitManager.resolve_sampler(config) is SplineSampler


def test_register_sampler_errors(monkeypatch):

    monkeypatch.setattr(FitManager, "_samplers", FitManager._samplers)

    with pytest.raises(ValueError):
        FitManager.register_sampler(dict)

    with pytest.raises(ValueError):
        FitManager.register_sampler(SplineSampler)


def test_load_data_section(tmp_path, small_data, fast_spline):

    paths = {
        "outcomes": str(tmp_path / "y.csv"),
        "covariates": str(tmp_path / "x.csv"),
        "grid": str(tmp_path / "grid.csv"),
    }
    write_dataset(
        small_data, paths["outcomes"], paths["covariates"], paths["grid"]
    )

    config = {**fast_spline, "data": {**paths, "n_levels": 4}}
    manager = FitManager(config)
    assert manager.data.equals(small_data)

    config["data"]["center"] = True
    centered = FitManager(config).data
    assert centered.covariates.mean() == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(
    "data",
    (None, {"outcomes": "y.csv"}),
    ids=["no_section", "no_covariates"],
)
def test_load_data_missing(fast_spline, data):

    config = dict(fast_spline)
    if data is not None:
        config["data"] = data

    with pytest.raises(MissingInputs):
        FitManager(config)


def test_predict_proba(fitted, small_data):

    probs = fitted.predict_proba(np.array([[0.5], [-1.0]]))

    assert probs.shape == (2, small_data.T, 4)
    assert probs.sum(axis=-1) == pytest.approx(np.ones((2, small_data.T)))
    assert fitted.predict_proba(np.array([0.5])).shape == (1, 32, 4)

    with pytest.raises(ValueError):
        fitted.predict_proba(np.ones((2, 3)))


def test_summarize(fitted):

    summary = fitted.summarize(alpha=0.1)
    assert summary.alpha == 0.1
    assert len(summary.bands) == 1


def test_save(tmp_path, fitted):

    fitted.save(str(tmp_path))

    for name in (META_FILE, "band_p0.csv", SUMMARY_FILE, LOG_FILE):
        assert os.path.isfile(tmp_path / name)

    config = load_config(tmp_path / CONFIG_FILE)
    assert config["model"] == fitted.sampler.model.to_dict()
    assert "data" not in config

    with open(tmp_path / SUMMARY_FILE) as f:
        summary = json.load(f)

    assert summary["n_draws"] == 30
    assert summary["n_levels"] == 4
    assert summary["model"]["basis"] == "ospline"

    log = pd.read_csv(tmp_path / LOG_FILE)
    assert "runtime" in log.columns

    loaded = PosteriorDraws.load(str(tmp_path))
    assert np.allclose(loaded.beta_draws, fitted.draws.beta_draws)


def test_save_is_reproducible(tmp_path, small_data, fast_spline):

    for name in ("a", "b"):
        manager = FitManager(fast_spline, data=small_data)
        manager.run()
        manager.save(str(tmp_path / name))

    files = sorted(os.listdir(tmp_path / "a"))
    assert files == sorted(os.listdir(tmp_path / "b"))

    for name in files:
        if name == LOG_FILE:
            continue

        with open(tmp_path / "a" / name, "rb") as fa:
            with open(tmp_path / "b" / name, "rb") as fb:
                assert fa.read() == fb.read(), name


def test_write_summary_plot(tmp_path, fitted):

    write_summary(fitted.draws, str(tmp_path), plot=True)
    assert os.path.isfile(tmp_path / "band_p0.png")
    assert os.path.isfile(tmp_path / "band_p0.csv")
