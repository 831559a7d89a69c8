"""Provides the `SplineSampler` class."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


from dataclasses import dataclass

import numpy as np
from scipy import linalg

from OPFRM.basis import init_fpc, spline_basis
from OPFRM.samplers.base import BaseSampler, inverse_gamma
from OPFRM.core.exceptions import PrecisionNotPositiveDefinite


@dataclass
class SplineChainState:
    """
    Spline chain state.

    Parameters
    ----------
    beta_s : np.ndarray
        K_total x P fixed-effect basis coefficients.
    beta_e : np.ndarray
        K_total x K_p fPC loadings.
    scores : np.ndarray
        N x K_p subject scores.
    sigma_e2 : float
        Residual variance.
    lambda_s : np.ndarray
        Length-P smoothing variances of the fixed-effect curves.
    lambda_e : np.ndarray
        Length-K_p smoothing variances of the fPC curves.
    hyper : dict
        `A_sigma`, `B_sigma`, `A_S`, `B_S` (length P), `A_E`, `B_E` and
        the prior precision kernel `penalty`.
    """

    beta_s: np.ndarray
    beta_e: np.ndarray
    scores: np.ndarray
    sigma_e2: float
    lambda_s: np.ndarray
    lambda_e: np.ndarray
    hyper: dict

    def fixed_part(self, X, design):
        """N x T fixed-effect curves X beta_S' Theta'."""
        return X @ self.beta_s.T @ design.T

    def fpc_part(self, design):
        """N x T subject-level curves C beta_E' Theta'."""
        return self.scores @ self.beta_e.T @ design.T


def draw_gaussian(precision, rhs, rng, block, jitter=1e-8, max_tries=6):
    """
    Draws from Normal(Q^-1 b, Q^-1) through the Cholesky factor of the
    precision Q. A failed factorization is retried with a diagonal jitter
    relative to the mean diagonal, ten times larger on every retry.

    Parameters
    ----------
    precision : np.ndarray
        Symmetric positive definite Q.
    rhs : np.ndarray
        b.
    rng : np.random.Generator
    block : str
        Block name reported on failure.
    jitter : float
        Relative size of the first retry jitter.
    max_tries : int
        Number of jittered retries before giving up.

    Raises
    ------
    PrecisionNotPositiveDefinite
    """

    scale = max(np.mean(np.diag(precision)), 1.0)
    eye = np.eye(precision.shape[0])
    chol = None

    for k in range(max_tries + 1):
        bump = 0.0 if k == 0 else jitter * 10.0 ** (k - 1) * scale
        try:
            chol = linalg.cholesky(precision + bump * eye, lower=False)
            break

        except linalg.LinAlgError:
            continue

    if chol is None or not np.all(np.isfinite(chol)):
        raise PrecisionNotPositiveDefinite(block)

    mean = linalg.cho_solve((chol, False), rhs)
    z = rng.standard_normal(rhs.shape[0])
    return mean + linalg.solve_triangular(chol, z, lower=False)


def prior_penalty(penalty, ridge, tol=1e-10):
    """
    Returns the prior precision kernel Delta + eps I of the basis
    coefficients, with eps = `ridge` times the smallest positive eigenvalue
    of Delta. The O'Sullivan penalty leaves constant and linear curves
    unpenalized; the ridge gives them a proper prior.

    Parameters
    ----------
    penalty : np.ndarray
        K_total x K_total symmetric positive semidefinite Delta.
    ridge : float
        Null-space weight relative to the smoothest penalized direction.
    tol : float
        Eigenvalues below `tol` times the largest count as zero.

    Returns
    -------
    np.ndarray
    """

    eig = np.linalg.eigvalsh(penalty)
    positive = eig[eig > tol * max(eig.max(), 0.0)]
    if positive.size == 0:
        eps = ridge
    else:
        eps = ridge * positive.min()
    return penalty + eps * np.eye(penalty.shape[0])


def kronecker_conditional(cov_x, response, design, penalty, smoothing, s2):
    """
    Precision and right-hand side for coefficients B (K_total x Q) in
    `response ~ Z B' Theta' + noise`, with vec(B) in column-major order.

    Parameters
    ----------
    cov_x : np.ndarray
        N x Q regressors Z.
    response : np.ndarray
        N x T partial residual.
    design : np.ndarray
        T x K_total basis Theta.
    penalty : np.ndarray
        K_total x K_total Delta.
    smoothing : np.ndarray
        Length-Q smoothing variances.
    s2 : float
        Residual variance.

    Returns
    -------
    precision : np.ndarray
        s2^-1 (Z'Z kron Theta'Theta) + (diag(1 / smoothing) kron Delta).
    rhs : np.ndarray
        s2^-1 vec(Theta' response' Z).
    """

    precision = np.kron(cov_x.T @ cov_x, design.T @ design) / s2 + np.kron(
        np.diag(1.0 / np.asarray(smoothing, dtype=float)), penalty
    )
    rhs = (design.T @ response.T @ cov_x).ravel(order="F") / s2
    return precision, rhs


def beta_s_conditional(state, y_star, X, basis):
    """Precision and right-hand side of the beta_S conditional."""

    return kronecker_conditional(
        X,
        y_star - state.fpc_part(basis.design),
        basis.design,
        state.hyper["penalty"],
        state.lambda_s,
        state.sigma_e2,
    )


def beta_e_conditional(state, y_star, X, basis):
    """Precision and right-hand side of the beta_E conditional."""

    return kronecker_conditional(
        state.scores,
        y_star - state.fixed_part(X, basis.design),
        basis.design,
        state.hyper["penalty"],
        state.lambda_e,
        state.sigma_e2,
    )


def sample_beta_s(state, y_star, X, basis, rng):
    """Draws beta_S from its Gaussian conditional."""

    Q, b = beta_s_conditional(state, y_star, X, basis)
    draw = draw_gaussian(Q, b, rng, "beta_s")
    state.beta_s = draw.reshape(state.beta_s.shape, order="F")
    return state.beta_s


def sample_beta_e(state, y_star, X, basis, rng):
    """Draws beta_E from its Gaussian conditional."""

    Q, b = beta_e_conditional(state, y_star, X, basis)
    draw = draw_gaussian(Q, b, rng, "beta_e")
    state.beta_e = draw.reshape(state.beta_e.shape, order="F")
    return state.beta_e


def scores_conditional(state, y_star, X, basis):
    """
    Shared covariance and per-subject means of the score rows.

    Returns
    -------
    means : np.ndarray
        N x K_p.
    cov : np.ndarray
        K_p x K_p.
    """

    F = basis.design @ state.beta_e
    k = F.shape[1]
    cov = linalg.inv(F.T @ F / state.sigma_e2 + np.eye(k))
    cov = (cov + cov.T) / 2
    resid = y_star - state.fixed_part(X, basis.design)
    means = resid @ F @ cov / state.sigma_e2
    return means, cov


def sample_scores(state, y_star, X, basis, rng):
    """Draws every row of the score matrix."""

    means, cov = scores_conditional(state, y_star, X, basis)
    chol = linalg.cholesky(cov, lower=True)
    z = rng.standard_normal(means.shape)
    state.scores = means + z @ chol.T
    return state.scores


def variance_posterior(state, y_star, X, basis):
    """
    Inverse-Gamma shapes and rates for sigma_E^2, lambda_S and lambda_E.

    Returns
    -------
    dict
    """

    h = state.hyper
    D = h["penalty"]
    N, T = y_star.shape
    K_total = basis.K_total
    K_p = state.beta_e.shape[1]

    resid = (
        y_star
        - state.fixed_part(X, basis.design)
        - state.fpc_part(basis.design)
    )
    quad_s = np.einsum("kp,kl,lp->p", state.beta_s, D, state.beta_s)
    quad_e = np.einsum("kq,kl,lq->q", state.beta_e, D, state.beta_e)

    return {
        "sigma_shape": h["A_sigma"] + N * T / 2.0,
        "sigma_rate": h["B_sigma"] + 0.5 * float((resid**2).sum()),
        "lambda_s_shape": h["A_S"] + K_total / 2.0,
        "lambda_s_rate": h["B_S"] + 0.5 * quad_s,
        "lambda_e_shape": h["A_E"] + K_p / 2.0,
        "lambda_e_rate": h["B_E"] + 0.5 * quad_e,
    }


def sample_variances(state, y_star, X, basis, rng):
    """Draws sigma_E^2, lambda_S and lambda_E."""

    post = variance_posterior(state, y_star, X, basis)
    state.sigma_e2 = float(
        inverse_gamma(post["sigma_shape"], post["sigma_rate"], rng)
    )
    state.lambda_s = inverse_gamma(
        post["lambda_s_shape"], post["lambda_s_rate"], rng
    )
    state.lambda_e = inverse_gamma(
        post["lambda_e_shape"], post["lambda_e_rate"], rng
    )


def least_squares_beta_s(y_star, X, design):
    """
    Closed-form least-squares fit B of `y_star ~ X B' Theta'`.

    Returns
    -------
    np.ndarray
        K_total x P.
    """

    curve_coef, *_ = linalg.lstsq(design, np.asarray(y_star).T)
    cov_coef, *_ = linalg.lstsq(X, curve_coef.T)
    return cov_coef.T


def initial_spline_state(y_star, X, basis, n_fpc, settings):
    """
    Starting state from the initial latent curves: least-squares fixed
    effects, fPCs of the remaining residuals, and the smoothing rates
    B_S = max(1, beta_hat' Delta beta_hat / 2) per covariate,
    with Delta the ridged prior kernel from `prior_penalty`.

    Parameters
    ----------
    y_star : np.ndarray
    X : np.ndarray
    basis : SplineBasis
    n_fpc : int
    settings : dict
        Spline hyperparameter settings.

    Returns
    -------
    SplineChainState
    """

    floor = settings["variance_floor"]
    D = prior_penalty(basis.penalty, settings["prior_ridge"])
    K_total = basis.K_total

    beta_s = least_squares_beta_s(y_star, X, basis.design)
    resid = y_star - X @ beta_s.T @ basis.design.T
    scores, beta_e = init_fpc(resid, basis.design, n_fpc)
    K_p = beta_e.shape[1]

    quad_s = np.einsum("kp,kl,lp->p", beta_s, D, beta_s)
    quad_e = np.einsum("kq,kl,lq->q", beta_e, D, beta_e)

    hyper = {
        "A_sigma": settings["sigma_shape"],
        "B_sigma": settings["sigma_rate"],
        "A_S": K_total / 2.0,
        "B_S": np.maximum(1.0, 0.5 * quad_s),
        "A_E": K_p / 2.0,
        "B_E": K_p / 2.0,
        "penalty": D,
    }

    remaining = resid - scores @ beta_e.T @ basis.design.T
    sigma_e2 = max(float(np.mean(remaining**2)), floor)

    lambda_s = (hyper["B_S"] + 0.5 * quad_s) / (hyper["A_S"] + K_total / 2.0)
    lambda_e = (hyper["B_E"] + 0.5 * quad_e) / (hyper["A_E"] + K_p / 2.0)

    return SplineChainState(
        beta_s=beta_s,
        beta_e=beta_e,
        scores=scores,
        sigma_e2=sigma_e2,
        lambda_s=np.maximum(lambda_s, floor),
        lambda_e=np.maximum(lambda_e, floor),
        hyper=hyper,
    )


class SplineSampler(BaseSampler):
    """
    Penalized spline regression sampler with an fPC residual structure,
    for both the B-spline composite penalty and the O'Sullivan penalty.
    """

    bases = ("bspline", "ospline")
    hyper_key = "spline"

    expected_config = {
        "model": {
            "basis": "str",
            "basis_size": "int",
            "n_fpc": "int (optional)",
            "n_samples": "int (optional)",
            "n_burn": "int (optional)",
            "seed": "int (optional)",
            "eta": "float (optional)",
        },
        "spline": {
            "sigma_shape": "float (optional)",
            "sigma_rate": "float (optional)",
            "prior_ridge": "float (optional)",
            "variance_floor": "float (optional)",
        },
    }

    def __init__(self, data, config, verbose=False):

        super().__init__(data, config, verbose)
        m = self.model
        self.basis = spline_basis(
            m.basis, self.data.time_grid, m.basis_size, m.eta
        )
        self.state = None

    def initialize(self):

        self.state = initial_spline_state(
            self.latent.y_star,
            self.X,
            self.basis,
            self.model.n_fpc,
            self.hyper,
        )

    def update(self, iteration):

        y_star, X, basis = self.latent.y_star, self.X, self.basis
        sample_beta_s(self.state, y_star, X, basis, self.rng)
        sample_beta_e(self.state, y_star, X, basis, self.rng)
        sample_scores(self.state, y_star, X, basis, self.rng)
        sample_variances(self.state, y_star, X, basis, self.rng)

    def mean_matrix(self):

        design = self.basis.design
        return self.state.fixed_part(self.X, design) + self.state.fpc_part(
            design
        )

    def data_scale_beta(self):

        return self.state.beta_s.T @ self.basis.design.T


def fit_spline(data, config, verbose=False):
    """
    Fits a penalized spline model to `data`.

    Parameters
    ----------
    data : OrdinalFunctionalDataset
    config : ModelConfig | dict

    Returns
    -------
    PosteriorDraws
    """

    return SplineSampler(data, config, verbose=verbose).run()
