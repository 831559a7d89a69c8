"""Tests for the latent-variable updates and probit probabilities."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import numpy as np
import pytest
from scipy import stats

from OPFRM.latent import (
    CutPoints,
    LatentState,
    rtruncnorm,
    sample_latent,
    predict_category,
    rtruncnorm_array,
    sample_cutpoints,
    cutpoint_bounds,
    initial_latent_state,
    category_probabilities,
)
from OPFRM.core.exceptions import CutPointOrderError, InvalidTruncation


@pytest.mark.parametrize(
    "lower, upper",
    ((-1.0, 1.0), (2.0, np.inf), (-np.inf, -3.0), (8.0, np.inf), (4.5, 5.0)),
    ids=["central", "upper_tail", "lower_tail", "far_tail", "narrow_tail"],
)
def test_truncated_normal_distribution(rng, lower, upper):

    draws = rtruncnorm_array(np.zeros(5000), 1.0, lower, upper, rng)

    assert np.all(draws > lower)
    assert np.all(draws < upper)

    ks = stats.kstest(draws, stats.truncnorm(lower, upper).cdf)
    assert ks.pvalue > 1e-3


def test_truncated_normal_location_scale(rng):

    draws = rtruncnorm_array(np.full(5000, 3.0), 2.0, 1.0, 4.0, rng)
    dist = stats.truncnorm((1.0 - 3.0) / 2.0, (4.0 - 3.0) / 2.0, 3.0, 2.0)

    assert stats.kstest(draws, dist.cdf).pvalue > 1e-3


def test_truncated_normal_shape(rng):

    lower = np.zeros((3, 4))
    draws = rtruncnorm_array(np.ones((3, 4)), 1.0, lower, np.inf, rng)
    assert draws.shape == (3, 4)

    x = rtruncnorm(0.0, 1.0, -np.inf, 0.0, rng)
    assert isinstance(x, float)
    assert x < 0


@pytest.mark.parametrize(
    "lower, upper", ((1.0, 1.0), (2.0, 1.0)), ids=["empty", "reversed"]
)
def test_invalid_truncation(rng, lower, upper):

    with pytest.raises(InvalidTruncation):
        rtruncnorm(0.0, 1.0, lower, upper, rng)


def test_invalid_sd(rng):

    with pytest.raises(ValueError):
        rtruncnorm(0.0, 0.0, 0.0, 1.0, rng)


@pytest.mark.parametrize(
    "values",
    ([], [0.5, 1.0], [0.0, 1.0, 1.0], [0.0, np.inf]),
    ids=["empty", "first_not_zero", "tied", "infinite"],
)
def test_invalid_cutpoints(values):

    with pytest.raises(ValueError):
        CutPoints(values)


def test_cutpoint_bounds_by_category():

    cuts = CutPoints([0.0, 1.0, 2.0])
    lower, upper = cuts.bounds(np.array([0, 1, 3]))

    assert cuts.n_levels == 4
    assert np.array_equal(lower, [-np.inf, 0.0, 2.0])
    assert np.array_equal(upper, [0.0, 1.0, np.inf])


def test_initial_state_is_consistent(tiny_data):

    state = initial_latent_state(tiny_data.outcomes, tiny_data.n_levels)
    state.check(tiny_data.outcomes)

    assert np.array_equal(state.cuts.values, [0.0, 1.0, 2.0])


def test_check_detects_violations(tiny_data):

    state = initial_latent_state(tiny_data.outcomes, tiny_data.n_levels)
    state.y_star[0, 0] = 5.0

    with pytest.raises(CutPointOrderError):
        state.check(tiny_data.outcomes)


def test_sample_latent_respects_categories(tiny_data, rng):

    state = initial_latent_state(tiny_data.outcomes, tiny_data.n_levels)
    mean = rng.normal(scale=3.0, size=tiny_data.outcomes.shape)

    state.y_star = sample_latent(state, mean, tiny_data.outcomes, rng)
    state.check(tiny_data.outcomes)


def test_cutpoint_extremes():

    y_star = np.array([[-1.0, 0.3, 0.7], [1.4, 0.2, -0.2]])
    outcomes = np.array([[0, 1, 1], [2, 1, 0]])
    maxima, minima = cutpoint_bounds(y_star, outcomes, 4)

    assert maxima[:3] == pytest.approx([-0.2, 0.7, 1.4])
    assert minima[:3] == pytest.approx([-1.0, 0.2, 1.4])
    assert maxima[3] == -np.inf
    assert minima[3] == np.inf


def test_sample_cutpoints_within_bounds(rng):

    outcomes = np.array([[0, 1, 2, 3], [1, 2, 3, 0]])
    y_star = np.array([[-0.5, 0.4, 1.6, 3.5], [0.9, 1.2, 2.8, -2.0]])
    state = LatentState(y_star, CutPoints([0.0, 1.0, 2.5]))

    for _ in range(200):
        cuts = sample_cutpoints(state, outcomes, rng)
        c = cuts.values

        assert c[0] == 0.0
        assert 0.9 < c[1] < 1.2
        assert 1.6 < c[2] < 2.8


def test_sample_cutpoints_empty_top_level(rng):

    outcomes = np.array([[0, 1, 2]])
    y_star = np.array([[-0.5, 0.5, 1.5]])
    state = LatentState(y_star, CutPoints([0.0, 1.0, 2.0]))

    c = sample_cutpoints(state, outcomes, rng).values
    assert 0.5 < c[1] < 1.5
    assert 1.5 < c[2] < 2.5


def test_sample_cutpoints_binary(rng):

    state = LatentState(np.array([[0.5, -0.5]]), CutPoints([0.0]))
    assert sample_cutpoints(state, np.array([[1, 0]]), rng) is state.cuts


def test_sample_cutpoints_order_error(rng):

    outcomes = np.array([[1, 2]])
    y_star = np.array([[1.5, 1.2]])
    state = LatentState(y_star, CutPoints([0.0, 1.0, 2.0]))

    with pytest.raises(CutPointOrderError):
        sample_cutpoints(state, outcomes, rng)


def test_category_probabilities():

    cuts = CutPoints([0.0, 1.0, 2.0])
    probs = category_probabilities(0.0, cuts)

    assert probs == pytest.approx(
        [0.5, 0.341345, 0.135905, 0.022750], abs=1e-6
    )
    assert probs.sum() == pytest.approx(1.0)


def test_category_probabilities_shape():

    cuts = CutPoints([0.0, 0.8])
    eta = np.linspace(-10, 10, 12).reshape(3, 4)
    probs = category_probabilities(eta, cuts)

    assert probs.shape == (3, 4, 3)
    assert probs.sum(axis=-1) == pytest.approx(np.ones((3, 4)))
    assert probs[-1, -1, -1] == pytest.approx(1.0)


@pytest.mark.parametrize(
    "eta, level", ((0.0, 0), (0.5, 1), (1.5, 2), (5.0, 3), (-4.0, 0))
)
def test_predict_category(eta, level):

    assert predict_category(eta, CutPoints([0.0, 1.0, 2.0])) == level


def test_predict_category_array():

    levels = predict_category(np.array([-1.0, 5.0]), CutPoints([0.0, 1.0]))
    assert np.array_equal(levels, [0, 2])


def test_far_tail_mean(rng):

    draws = rtruncnorm_array(np.zeros(100_000), 1.0, 8.0, np.inf, rng)

    assert np.all(np.isfinite(draws))
    assert draws.mean() == pytest.approx(8.1215, abs=0.005)


def test_latent_follows_extreme_mean(rng):

    draws = rtruncnorm_array(np.full(100, 50.0), 1.0, -np.inf, 0.0, rng)

    assert np.all(np.isfinite(draws))
    assert np.all(draws < 0)
    assert np.all(draws > -0.2)


def test_category_probabilities_grid():

    eta = np.linspace(-8, 8, 2500)
    for cuts in ([0.0], [0.0, 0.3], [0.0, 1.0, 2.0], [0.0, 0.1, 4.0, 4.2]):
        probs = category_probabilities(eta, CutPoints(cuts))
        assert np.abs(probs.sum(axis=-1) - 1.0).max() < 1e-12

        # P[Y >= l] grows with the predictor
        upper_tail = np.cumsum(probs[:, ::-1], axis=1)[:, ::-1]
        assert np.all(np.diff(upper_tail, axis=0) >= -1e-12)
