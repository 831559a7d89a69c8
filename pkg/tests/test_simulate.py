"""Tests for the simulation scenarios and data generator."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import numpy as np
import pytest
from scipy import stats

from OPFRM.simulate import (
    SETTINGS,
    SimulationScenario,
    true_curve,
    rescale_grid,
    generate_dataset,
    latent_error_draw,
)
from OPFRM.core.random import rng_stream
from OPFRM.core.exceptions import InvalidModelConfig


def test_scenario_defaults():

    scenario = SimulationScenario("peak", "exponential")

    assert scenario.n_subjects == 40
    assert scenario.n_timepoints == 256
    assert scenario.n_replicates == 200
    assert scenario.cut_truth == pytest.approx((0.0, 0.8, 1.6))
    assert scenario.rho == 0.5
    assert SimulationScenario("peak", "compound_symmetric").rho == 0.3
    assert SimulationScenario("peak", "independent").rho == 0.0


def test_scenario_dict_roundtrip():

    scenario = SimulationScenario("decay", "independent", n_levels=3, seed=9)
    data = scenario.to_dict()

    assert data["cut_truth"] == pytest.approx([0.0, 0.8])
    assert SimulationScenario.from_dict(data) == scenario


def test_scenario_replace():

    scenario = SimulationScenario("decay", "independent")
    other = scenario.replace(n_subjects=10)

    assert other.n_subjects == 10
    assert other.setting == "decay"
    assert scenario.n_subjects == 40


@pytest.mark.parametrize(
    "kwargs, key",
    (
        ({"setting": "wiggly"}, "setting"),
        ({"cov_structure": "ar2"}, "cov_structure"),
        ({"n_levels": 1}, "n_levels"),
        ({"n_subjects": 2.5}, "n_subjects"),
        ({"cut_truth": (0.0, 1.0)}, "cut_truth"),
        ({"cut_truth": (0.5, 1.0, 2.0)}, "cut_truth"),
        ({"cut_truth": (0.0, 1.0, 1.0)}, "cut_truth"),
        ({"rho": 1.0}, "rho"),
        ({"rho": -0.2}, "rho"),
        ({"seed": -1}, "seed"),
    ),
    ids=[
        "setting",
        "structure",
        "levels",
        "subjects",
        "cut_count",
        "cut_start",
        "cut_order",
        "rho_one",
        "rho_negative",
        "seed",
    ],
)
def test_scenario_validation(kwargs, key):

    base = {"setting": "sigmoidal", "cov_structure": "exponential"}
    with pytest.raises(InvalidModelConfig) as e:
        SimulationScenario(**{**base, **kwargs})

    assert e.value.key == key


def test_scenario_unknown_key():

    with pytest.raises(InvalidModelConfig) as e:
        SimulationScenario.from_dict(
            {"setting": "peak", "cov_structure": "independent", "n": 4}
        )

    assert e.value.key == "n"


def test_rescale_grid():

    assert rescale_grid([2.0, 3.0, 6.0]) == pytest.approx([0.0, 0.25, 1.0])
    assert rescale_grid([5.0]) == pytest.approx([0.0])


@pytest.mark.parametrize(
    "setting, at_half",
    (
        ("sigmoidal", 0.5),
        ("seasonal", 0.0),
        ("decay", np.exp(-1.5)),
        ("peak", 1.0),
        ("null", 0.0),
    ),
)
def test_true_curve(setting, at_half):

    s = np.linspace(0, 1, 101)
    curve = true_curve(setting, s)

    assert curve.shape == s.shape
    assert curve[50] == pytest.approx(at_half, abs=1e-12)
    assert true_curve(setting, s, amplitude=2.0) == pytest.approx(2 * curve)


def test_true_curve_unknown():

    with pytest.raises(InvalidModelConfig):
        true_curve("wiggly", np.zeros(3))


@pytest.mark.parametrize(
    "structure, rho",
    (("independent", 0.0), ("exponential", 0.5), ("compound_symmetric", 0.3)),
)
def test_latent_error_unit_variance(rng, structure, rho):

    e = latent_error_draw(structure, rho, 6, rng, size=20000)

    assert e.shape == (20000, 6)
    assert e.var(axis=0) == pytest.approx(np.ones(6), abs=0.05)


def test_exponential_correlation(rng):

    e = latent_error_draw("exponential", 0.5, 6, rng, size=20000)
    corr = np.corrcoef(e.T)

    assert corr[0, 1] == pytest.approx(0.5, abs=0.03)
    assert corr[2, 4] == pytest.approx(0.25, abs=0.03)
    assert corr[0, 5] == pytest.approx(0.5**5, abs=0.03)


def test_compound_symmetric_correlation(rng):

    e = latent_error_draw("compound_symmetric", 0.3, 6, rng, size=20000)
    corr = np.corrcoef(e.T)

    assert corr[0, 1] == pytest.approx(0.3, abs=0.03)
    assert corr[0, 5] == pytest.approx(0.3, abs=0.03)


def test_single_error_curve(rng):

    assert latent_error_draw("exponential", 0.5, 8, rng).shape == (8,)


def test_generate_dataset(small_scenario):

    data, truth = generate_dataset(small_scenario, rng_stream(7, 0))

    assert data.outcomes.shape == (30, 32)
    assert data.covariates.shape == (30, 1)
    assert data.n_levels == 4
    assert truth.shape == (32,)
    assert data.time_grid[0] == 1.0
    assert data.outcomes.min() >= 0 and data.outcomes.max() <= 3


def test_generate_dataset_deterministic(small_scenario):

    a, _ = generate_dataset(small_scenario, rng_stream(7, 3))
    b, _ = generate_dataset(small_scenario, rng_stream(7, 3))
    c, _ = generate_dataset(small_scenario, rng_stream(7, 4))

    assert a.equals(b)
    assert not a.equals(c)


@pytest.mark.parametrize("setting", SETTINGS)
def test_every_setting_generates(setting):

    scenario = SimulationScenario(
        setting, "independent", n_subjects=5, n_timepoints=16
    )
    data, truth = generate_dataset(scenario, rng_stream(0, 0))
    assert data.T == truth.size == 16


def test_threshold_matches_multinomial():

    scenario = SimulationScenario(
        "seasonal", "independent", n_subjects=200, n_timepoints=50
    )
    a, _ = generate_dataset(scenario, rng_stream(3, 0), method="threshold")
    b, _ = generate_dataset(scenario, rng_stream(3, 0), method="multinomial")

    assert np.array_equal(a.covariates, b.covariates)

    table = np.vstack((a.level_counts(), b.level_counts()))
    assert stats.chi2_contingency(table).pvalue > 1e-3


def test_null_setting_ignores_covariate():

    scenario = SimulationScenario(
        "null", "independent", n_subjects=400, n_timepoints=20
    )
    data, truth = generate_dataset(scenario, rng_stream(2, 0))

    assert not truth.any()
    share_zero = (data.outcomes == 0).mean()
    assert share_zero == pytest.approx(0.5, abs=0.02)


def test_multinomial_requires_independent(small_scenario, rng):

    with pytest.raises(ValueError):
        generate_dataset(small_scenario, rng, method="multinomial")


def test_unknown_method(small_scenario, rng):

    with pytest.raises(ValueError):
        generate_dataset(small_scenario, rng, method="bootstrap")
