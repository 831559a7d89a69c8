"""
Latent-variable bridge between ordinal outcomes and the Gaussian regression:
truncated-normal latent updates, cut-point updates and probit category
probabilities.
"""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


from dataclasses import dataclass

import numpy as np
from scipy import special

from OPFRM.core.exceptions import CutPointOrderError, InvalidTruncation

TAIL_THRESHOLD = 4.0


@dataclass(frozen=True, eq=False)
class CutPoints:
    """
    Ordered thresholds c_1 < ... < c_{L-1} with c_1 fixed at 0. Category l
    occupies (c_l, c_{l+1}) with c_0 = -inf and c_L = +inf.

    Parameters
    ----------
    values : array-like
        Length L-1 vector starting at 0.
    """

    values: np.ndarray

    def __post_init__(self):

        v = np.array(self.values, dtype=float).ravel()
        if v.size < 1:
            raise ValueError("At least one cut point is required.")

        if v[0] != 0.0:
            raise ValueError(f"First cut point must be 0, got {v[0]}.")

        if np.any(np.diff(v) <= 0) or not np.all(np.isfinite(v)):
            raise ValueError(f"Cut points must be finite and increasing: {v}.")

        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def evenly_spaced(cls, n_levels):
        """Cut points 0, 1, ..., L-2."""
        return cls(np.arange(n_levels - 1, dtype=float))

    @property
    def n_levels(self):
        return self.values.size + 1

    @property
    def full(self):
        """Length L+1 vector (-inf, c_1, ..., c_{L-1}, +inf)."""
        return np.concatenate(([-np.inf], self.values, [np.inf]))

    def bounds(self, outcomes):
        """Returns the (lower, upper) latent interval of every outcome."""

        full = self.full
        outcomes = np.asarray(outcomes)
        return full[outcomes], full[outcomes + 1]


@dataclass
class LatentState:
    """
    Latent Gaussian outcomes and current cut points.

    Parameters
    ----------
    y_star : np.ndarray
        N x T latent matrix.
    cuts : CutPoints
    """

    y_star: np.ndarray
    cuts: CutPoints

    def check(self, outcomes):
        """
        Raises `CutPointOrderError` if any latent value sits outside the
        interval of its observed category.
        """

        lower, upper = self.cuts.bounds(outcomes)
        bad = ~((self.y_star > lower) & (self.y_star < upper))
        if np.any(bad):
            i = np.argwhere(bad)[0]
            raise CutPointOrderError(
                int(np.asarray(outcomes)[tuple(i)]),
                float(lower[tuple(i)]),
                float(upper[tuple(i)]),
            )


def initial_latent_state(outcomes, n_levels):
    """
    Starting state: cut points at unit gaps from 0 and every latent value at
    the midpoint of its category interval. The two unbounded end categories
    sit 0.5 beyond their finite cut.

    Parameters
    ----------
    outcomes : np.ndarray
        N x T levels.
    n_levels : int

    Returns
    -------
    LatentState
    """

    cuts = CutPoints.evenly_spaced(n_levels)
    y_star = np.asarray(outcomes, dtype=float) - 0.5
    return LatentState(y_star, cuts)


def _tail_draws(a, b, rng):
    """
    Standard normal draws truncated to (a, b) with a >= TAIL_THRESHOLD.
    Wide intervals use exponential rejection with the optimal rate, narrow
    ones uniform rejection.
    """

    z = np.empty_like(a)
    pending = np.arange(a.size)
    narrow = a * (b - a) <= 1.0
    lam = (a + np.sqrt(a**2 + 4.0)) / 2.0

    while pending.size:
        aa, bb = a[pending], b[pending]
        nn, ll = narrow[pending], lam[pending]

        e = rng.standard_exponential(pending.size)
        u = rng.random(pending.size)
        v = rng.random(pending.size)

        width = np.where(nn, bb - aa, 0.0)
        cand = np.where(nn, aa + u * width, aa + e / ll)
        log_accept = np.where(
            nn, (aa**2 - cand**2) / 2.0, -((cand - ll) ** 2) / 2.0
        )
        ok = (np.log1p(-v) < log_accept) & (cand < bb)

        z[pending[ok]] = cand[ok]
        pending = pending[~ok]

    return z


def rtruncnorm_array(mean, sd, lower, upper, rng):
    """
    Vectorized draws from Normal(mean, sd**2) truncated to (lower, upper).

    Intervals are standardized and mirrored so that most of their mass lies
    at or above 0. Intervals starting at least `TAIL_THRESHOLD` standard
    deviations out are drawn by rejection; the rest by inverse CDF on the
    survival scale.

    Parameters
    ----------
    mean, sd, lower, upper : array-like
        Broadcastable arrays; bounds may be infinite.
    rng : np.random.Generator

    Returns
    -------
    np.ndarray
        Draws strictly inside (lower, upper).

    Raises
    ------
    InvalidTruncation
        `lower >= upper` anywhere.
    """

    arrays = np.broadcast_arrays(mean, sd, lower, upper)
    shape = arrays[0].shape
    mean, sd, lower, upper = (
        np.array(x, dtype=float).ravel() for x in arrays
    )

    bad = ~(lower < upper)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise InvalidTruncation(float(lower[i]), float(upper[i]))

    if np.any(~(sd > 0)):
        raise ValueError("Standard deviations must be positive.")

    a = (lower - mean) / sd
    b = (upper - mean) / sd

    flip = (a + b) < 0
    a, b = np.where(flip, -b, a), np.where(flip, -a, b)

    z = np.empty_like(a)
    tail = a >= TAIL_THRESHOLD

    if np.any(~tail):
        q_a = special.ndtr(-a[~tail])
        q_b = special.ndtr(-b[~tail])
        u = rng.random(q_a.size)
        z[~tail] = -special.ndtri(q_b + u * (q_a - q_b))

    if np.any(tail):
        z[tail] = _tail_draws(a[tail], b[tail], rng)

    z = np.where(flip, -z, z)
    x = mean + sd * z

    x = np.clip(x, np.nextafter(lower, np.inf), np.nextafter(upper, -np.inf))
    return x.reshape(shape)


def rtruncnorm(mean, sd, lower, upper, rng):
    """
    Single draw from Normal(mean, sd**2) truncated to (lower, upper).

    Parameters
    ----------
    mean : float
    sd : float
    lower : float
        May be -inf.
    upper : float
        May be +inf.
    rng : np.random.Generator

    Returns
    -------
    float
    """

    return float(rtruncnorm_array(mean, sd, lower, upper, rng))


def sample_latent(state, mean_matrix, outcomes, rng):
    """
    Redraws every latent value from Normal(mean, 1) truncated to the interval
    of its observed category.

    Parameters
    ----------
    state : LatentState
    mean_matrix : np.ndarray
        N x T linear predictor on the data scale.
    outcomes : np.ndarray
        N x T observed levels.
    rng : np.random.Generator

    Returns
    -------
    np.ndarray
        New N x T latent matrix.
    """

    lower, upper = state.cuts.bounds(outcomes)
    return rtruncnorm_array(mean_matrix, 1.0, lower, upper, rng)


def cutpoint_bounds(y_star, outcomes, n_levels):
    """
    Per-category extremes of the latent values, with the empty-set
    convention max = -inf and min = +inf.

    Returns
    -------
    maxima, minima : np.ndarray
        Length-L vectors.
    """

    maxima = np.full(n_levels, -np.inf)
    minima = np.full(n_levels, np.inf)
    for level in range(n_levels):
        values = y_star[outcomes == level]
        if values.size:
            maxima[level] = values.max()
            minima[level] = values.min()

    return maxima, minima


def sample_cutpoints(state, outcomes, rng):
    """
    Updates the free cut points c_2, ..., c_{L-1} in ascending order, each
    from a uniform between the largest latent value of the category below
    (or the previous cut) and the smallest latent value of the category
    above (or the next cut). An unbounded interval (a, inf) is replaced by
    (a, a + 1).

    Parameters
    ----------
    state : LatentState
    outcomes : np.ndarray
    rng : np.random.Generator

    Returns
    -------
    CutPoints

    Raises
    ------
    CutPointOrderError
        The lower bound is not below the upper bound.
    """

    full = state.cuts.full
    L = state.cuts.n_levels
    if L <= 2:
        return state.cuts

    maxima, minima = cutpoint_bounds(state.y_star, outcomes, L)

    for ell in range(2, L):
        a = max(maxima[ell - 1], full[ell - 1])
        b = min(minima[ell], full[ell + 1])
        if not a < b:
            raise CutPointOrderError(ell, a, b)

        if np.isinf(b):
            b = a + 1.0

        draw = a + (b - a) * rng.random()
        full[ell] = np.clip(
            draw, np.nextafter(a, np.inf), np.nextafter(b, -np.inf)
        )

    return CutPoints(full[1:-1])


def category_probabilities(linear_predictor, cuts):
    """
    Probit category probabilities
    P[Y = l] = Phi(c_{l+1} - eta) - Phi(c_l - eta).

    Parameters
    ----------
    linear_predictor : float | np.ndarray
    cuts : CutPoints

    Returns
    -------
    np.ndarray
        Shape `linear_predictor.shape + (L,)`.
    """

    eta = np.asarray(linear_predictor, dtype=float)[..., None]
    full = cuts.full
    upper = full[1:] - eta
    lower = full[:-1] - eta

    # upper tail differences are taken on the survival scale
    right = lower > 0
    probs = np.where(
        right,
        special.ndtr(-lower) - special.ndtr(-upper),
        special.ndtr(upper) - special.ndtr(lower),
    )

    return np.clip(probs, 0.0, 1.0)


def predict_category(linear_predictor, cuts):
    """
    Most probable level under the probit model, ties going to the lower
    level.

    Parameters
    ----------
    linear_predictor : float | np.ndarray
    cuts : CutPoints

    Returns
    -------
    int | np.ndarray
    """

    level = np.argmax(category_probabilities(linear_predictor, cuts), axis=-1)
    return int(level) if np.ndim(level) == 0 else level
