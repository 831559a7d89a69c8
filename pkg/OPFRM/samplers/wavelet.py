"""Provides the `WaveletSampler` class."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


from dataclasses import dataclass

import numpy as np
from scipy import linalg, special

from OPFRM.basis import WaveletTransform
from OPFRM.samplers.base import BaseSampler, inverse_gamma
from OPFRM.core.exceptions import RankDeficientError


@dataclass
class WaveletChainState:
    """
    Wavelet-space chain state. Coefficient arrays are P x T*; level
    parameters are P x (J + 1).

    Parameters
    ----------
    beta_w : np.ndarray
        Coefficients, exactly 0 wherever `gamma` is 0.
    gamma : np.ndarray
        Inclusion indicators.
    tau : np.ndarray
        Slab variances per covariate and scale group.
    pi : np.ndarray
        Inclusion probabilities per covariate and scale group.
    sigma2 : np.ndarray
        Length-T* residual variances per coefficient column.
    hyper : dict
        Fixed hyperparameters `a_tau`, `b_tau`, `a_pi`, `b_pi`,
        `a_sigma2`, `b_sigma2`.
    mle_beta : np.ndarray
        Least-squares estimates from the current projected latent curves.
    mle_var : np.ndarray
        Their variances.
    """

    beta_w: np.ndarray
    gamma: np.ndarray
    tau: np.ndarray
    pi: np.ndarray
    sigma2: np.ndarray
    hyper: dict
    mle_beta: np.ndarray
    mle_var: np.ndarray


def least_squares(y_star_w, X):
    """
    Column-wise least squares of wavelet-space latent curves on `X`.

    Returns
    -------
    beta_hat : np.ndarray
        P x T* estimates.
    xtx_inv : np.ndarray
        P x P inverse of X'X.

    Raises
    ------
    RankDeficientError
    """

    X = np.asarray(X, dtype=float)
    rank = np.linalg.matrix_rank(X)
    if rank < X.shape[1]:
        raise RankDeficientError(rank, X.shape[1])

    xtx_inv = linalg.inv(X.T @ X)
    return xtx_inv @ X.T @ y_star_w, xtx_inv


def empirical_bayes_init(y_star_w, X, spec, settings):
    """
    Starting state and fixed hyperparameters from least squares.

    Per coefficient column the residual mean square starts sigma^2. Per
    covariate and scale group, the Beta prior on pi has mean equal to the
    share of standardized estimates beyond `threshold` (clipped to
    [`pi_floor`, `pi_cap`]) and weight `pi_weight`; the Inverse-Gamma prior
    on tau has shape `tau_shape` and mean equal to the empirical variance
    of those estimates, or of the whole group when fewer than two qualify.
    A single-coefficient group uses its square.

    Parameters
    ----------
    y_star_w : np.ndarray
        N x T* projected latent curves.
    X : np.ndarray
        N x P covariates.
    spec : WaveletTransform
    settings : dict
        Wavelet hyperparameter settings.

    Returns
    -------
    WaveletChainState
    """

    X = np.asarray(X, dtype=float)
    N, P = X.shape
    floor = settings["variance_floor"]

    beta_hat, xtx_inv = least_squares(y_star_w, X)
    resid = y_star_w - X @ beta_hat
    sigma2 = np.maximum((resid**2).sum(axis=0) / max(N - P, 1), floor)

    V = np.diag(xtx_inv)[:, None] * sigma2[None, :]
    big = np.abs(beta_hat / np.sqrt(V)) > settings["threshold"]

    n_groups = spec.n_groups
    frac = np.empty((P, n_groups))
    slab = np.empty((P, n_groups))
    for j in range(n_groups):
        cols = spec.groups == j
        frac[:, j] = big[:, cols].mean(axis=1)
        for p in range(P):
            chosen = beta_hat[p, cols][big[p, cols]]
            if chosen.size < 2:
                chosen = beta_hat[p, cols]

            if chosen.size < 2:
                slab[p, j] = np.mean(chosen**2)
            else:
                slab[p, j] = np.var(chosen)

    frac = np.clip(frac, settings["pi_floor"], settings["pi_cap"])
    slab = np.maximum(slab, floor)
    a_tau = settings["tau_shape"]

    hyper = {
        "a_tau": a_tau,
        "b_tau": slab * (a_tau - 1),
        "a_pi": settings["pi_weight"] * frac,
        "b_pi": settings["pi_weight"] * (1 - frac),
        "a_sigma2": settings["sigma2_shape"],
        "b_sigma2": settings["sigma2_rate"],
        "groups": spec.groups,
    }

    gamma = big.astype(int)
    return WaveletChainState(
        beta_w=np.where(gamma == 1, beta_hat, 0.0),
        gamma=gamma,
        tau=slab.copy(),
        pi=frac.copy(),
        sigma2=sigma2,
        hyper=hyper,
        mle_beta=beta_hat,
        mle_var=V,
    )


def inclusion_probability(beta_hat, V, tau, pi):
    """
    Posterior probability that a coefficient is drawn from the slab, the
    odds being the prior odds times the ratio of the marginal likelihoods
    Normal(beta_hat; 0, V + tau) / Normal(beta_hat; 0, V).

    Parameters
    ----------
    beta_hat, V, tau, pi : array-like
        Broadcastable arrays.

    Returns
    -------
    np.ndarray
    """

    beta_hat, V, tau, pi = np.broadcast_arrays(beta_hat, V, tau, pi)
    zeta2 = beta_hat**2 / V
    log_odds = (
        special.logit(pi)
        - 0.5 * np.log1p(tau / V)
        + 0.5 * zeta2 * tau / (V + tau)
    )

    return special.expit(log_odds)


def slab_moments(beta_hat, V, tau):
    """Returns the slab posterior mean and variance."""

    shrink = 1.0 / (1.0 + V / tau)
    return beta_hat * shrink, V * shrink


def sample_spike_slab(state, rng, p=None, c=None):
    """
    Draws inclusion indicators and coefficients from the spike-and-slab
    conditional. Every (p, c) is updated unless both are given.

    Parameters
    ----------
    state : WaveletChainState
        `mle_beta` and `mle_var` must be current.
    rng : np.random.Generator
    p, c : int (optional)
        Single covariate and coefficient column to update.

    Returns
    -------
    np.ndarray
        Inclusion probabilities used for the draw.
    """

    groups = state.hyper["groups"]
    if p is None or c is None:
        rows, cols = slice(None), slice(None)
        tau = state.tau[:, groups]
        pi = state.pi[:, groups]

    else:
        rows, cols = p, c
        tau = state.tau[p, groups[c]]
        pi = state.pi[p, groups[c]]

    beta_hat = state.mle_beta[rows, cols]
    V = state.mle_var[rows, cols]

    alpha = inclusion_probability(beta_hat, V, tau, pi)
    gamma = (rng.random(np.shape(alpha)) < alpha).astype(int)

    mu, eps = slab_moments(beta_hat, V, tau)
    draw = mu + np.sqrt(eps) * rng.standard_normal(np.shape(alpha))

    state.gamma[rows, cols] = gamma
    state.beta_w[rows, cols] = np.where(gamma == 1, draw, 0.0)

    return alpha


def sigma2_log_target(s, ssr, n, a, b):
    """Log density of sigma^2 given n residuals with sum of squares `ssr`."""

    log_s = np.log(s)
    return -(n / 2.0 + a + 1.0) * log_s - (ssr / 2.0 + b) / s


def sigma2_mh_step(sigma2, ssr, n, step, a, b, rng):
    """
    One Metropolis-Hastings update of each variance with a log-normal random
    walk proposal centered at the current value.

    Parameters
    ----------
    sigma2 : np.ndarray
        Current variances.
    ssr : np.ndarray
        Residual sums of squares per variance.
    n : int
        Residuals behind each sum.
    step : np.ndarray
        Proposal standard deviations on the log scale.
    a, b : float
        Inverse-Gamma prior shape and rate.
    rng : np.random.Generator

    Returns
    -------
    sigma2 : np.ndarray
    accepted : np.ndarray
        Boolean acceptance flags.
    """

    sigma2 = np.asarray(sigma2, dtype=float)
    proposal = sigma2 * np.exp(step * rng.standard_normal(sigma2.shape))

    log_ratio = (
        sigma2_log_target(proposal, ssr, n, a, b)
        - sigma2_log_target(sigma2, ssr, n, a, b)
        + np.log(proposal)
        - np.log(sigma2)
    )
    accepted = np.log(rng.random(sigma2.shape)) < log_ratio

    return np.where(accepted, proposal, sigma2), accepted


def sample_sigma2_mh(state, y_star_w, X, step, rng):
    """
    Metropolis-Hastings sweep over all residual variances.

    Returns
    -------
    np.ndarray
        Boolean acceptance flags per column.
    """

    resid = y_star_w - X @ state.beta_w
    ssr = (resid**2).sum(axis=0)

    state.sigma2, accepted = sigma2_mh_step(
        state.sigma2,
        ssr,
        X.shape[0],
        step,
        state.hyper["a_sigma2"],
        state.hyper["b_sigma2"],
        rng,
    )
    return accepted


def tau_pi_posterior(gamma, beta_w, groups, hyper):
    """
    Conjugate posterior parameters for the slab variances and inclusion
    probabilities, summed within each scale group.

    Returns
    -------
    dict
        `tau_shape`, `tau_rate`, `pi_a`, `pi_b`, each P x (J + 1).
    """

    n_groups = int(np.max(groups)) + 1
    G = np.eye(n_groups)[groups]
    included = gamma @ G
    total = np.ones_like(gamma) @ G

    return {
        "tau_shape": hyper["a_tau"] + 0.5 * included,
        "tau_rate": hyper["b_tau"] + 0.5 * (gamma * beta_w**2) @ G,
        "pi_a": hyper["a_pi"] + included,
        "pi_b": hyper["b_pi"] + total - included,
    }


def sample_tau_pi(state, rng, eps=1e-12):
    """Updates every tau and pi from their conjugate conditionals."""

    post = tau_pi_posterior(
        state.gamma, state.beta_w, state.hyper["groups"], state.hyper
    )
    state.tau = inverse_gamma(post["tau_shape"], post["tau_rate"], rng)
    state.pi = np.clip(rng.beta(post["pi_a"], post["pi_b"]), eps, 1 - eps)


class WaveletSampler(BaseSampler):
    """
    Spike-and-slab wavelet regression sampler.

    Each sweep projects the latent curves into the wavelet domain, refreshes
    the least-squares estimates, then updates the coefficients, the residual
    variances by adaptive Metropolis-Hastings, and the slab variances and
    inclusion probabilities.
    """

    bases = ("symmlet",)
    hyper_key = "wavelet"

    expected_config = {
        "model": {
            "basis": "str",
            "basis_size": "int",
            "n_samples": "int (optional)",
            "n_burn": "int (optional)",
            "seed": "int (optional)",
            "vanishing_moments": "int (optional)",
            "family": "str (optional)",
            "padding": "str (optional)",
        },
        "wavelet": {
            "sigma2_shape": "float (optional)",
            "sigma2_rate": "float (optional)",
            "threshold": "float (optional)",
            "pi_floor": "float (optional)",
            "pi_cap": "float (optional)",
            "pi_weight": "float (optional)",
            "tau_shape": "float (optional)",
            "target_acceptance": "float (optional)",
            "adapt_interval": "int (optional)",
            "initial_step": "float (optional)",
            "variance_floor": "float (optional)",
        },
    }

    def __init__(self, data, config, verbose=False):

        super().__init__(data, config, verbose)
        m = self.model
        self.transform = WaveletTransform(
            self.data.T,
            m.basis_size,
            m.family,
            m.vanishing_moments,
            m.padding,
        )
        self.state = None

    def project(self):
        """Returns the latent curves in the wavelet domain, N x T*."""

        return self.transform.forward(self.latent.y_star)

    def initialize(self):

        self.state = empirical_bayes_init(
            self.project(), self.X, self.transform, self.hyper
        )
        self.step = np.full(self.transform.T_star, self.hyper["initial_step"])
        self._accepted = np.zeros(self.transform.T_star)
        self._window = 0

    def refresh_mle(self, y_star_w):
        """Recomputes the least-squares estimates and their variances."""

        beta_hat, xtx_inv = least_squares(y_star_w, self.X)
        self.state.mle_beta = beta_hat
        self.state.mle_var = (
            np.diag(xtx_inv)[:, None] * self.state.sigma2[None, :]
        )

    def update(self, iteration):

        y_star_w = self.project()
        self.refresh_mle(y_star_w)

        sample_spike_slab(self.state, self.rng)
        accepted = sample_sigma2_mh(
            self.state, y_star_w, self.X, self.step, self.rng
        )
        sample_tau_pi(self.state, self.rng)

        if iteration < self.model.n_burn:
            self._adapt(iteration, accepted)

    def _adapt(self, iteration, accepted):
        """Tunes the per-column proposal scales during burn-in."""

        self._accepted += accepted
        interval = self.hyper["adapt_interval"]
        if (iteration + 1) % interval:
            return

        self._window += 1
        rate = self._accepted / interval
        delta = min(0.5, 1.0 / np.sqrt(self._window))
        direction = np.where(rate > self.hyper["target_acceptance"], 1.0, -1.0)
        self.step = self.step * np.exp(direction * delta)
        self._accepted[:] = 0

        self.log(
            "adapt",
            iteration=iteration + 1,
            block="sigma2",
            acceptance=float(rate.mean()),
            step=float(self.step.mean()),
        )

    def mean_matrix(self):

        return self.X @ self.data_scale_beta()

    def data_scale_beta(self):

        return self.transform.to_data_scale(self.state.beta_w)


def fit_wavelet(data, config, verbose=False):
    """
    Fits the wavelet model to `data`.

    Parameters
    ----------
    data : OrdinalFunctionalDataset
    config : ModelConfig | dict

    Returns
    -------
    PosteriorDraws
    """

    return WaveletSampler(data, config, verbose=verbose).run()
