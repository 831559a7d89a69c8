"""Initial functional principal components for the spline samplers."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import warnings

import numpy as np
from scipy import linalg


def project_onto_basis(curves, design):
    """
    Least-squares coefficients of each row of `curves` on `design`.

    Parameters
    ----------
    curves : np.ndarray
        N x T matrix.
    design : np.ndarray
        T x K_total matrix.

    Returns
    -------
    np.ndarray
        N x K_total coefficients.
    """

    coef, *_ = linalg.lstsq(design, np.asarray(curves, dtype=float).T)
    return coef.T


def init_fpc(residuals, design, n_fpc, tol=1e-12):
    """
    Starting scores and loadings for the fPC residual structure: a truncated
    SVD of the residual curves projected onto the basis, with scores scaled
    to unit empirical variance per component.

    Parameters
    ----------
    residuals : np.ndarray
        N x T residual curves.
    design : np.ndarray
        T x K_total basis design.
    n_fpc : int
        Requested number of components K_p.
    tol : float
        Singular values below `tol` times the largest are treated as zero.

    Returns
    -------
    scores : np.ndarray
        N x K_p matrix C0.
    loadings : np.ndarray
        K_total x K_p matrix beta^E_0, so that
        `scores @ loadings.T @ design.T` approximates `residuals`.
    """

    if n_fpc < 1:
        raise ValueError(f"n_fpc must be at least 1, got {n_fpc}.")

    A = project_onto_basis(residuals, design)
    N, K_total = A.shape

    available = min(N, K_total)
    if n_fpc > available:
        warnings.warn(
            f"Requested {n_fpc} fPCs but only {available} are available "
            f"(N = {N}, K = {K_total}); using {available}."
        )
        n_fpc = available

    U, s, Vt = linalg.svd(A, full_matrices=False)
    scale = s[0] if s.size else 0.0
    s = np.where(s > tol * max(scale, tol), s, 0.0)

    raw = U[:, :n_fpc] * s[:n_fpc]
    sd = raw.std(axis=0)
    live = sd > 0

    scores = np.zeros((N, n_fpc))
    loadings = np.zeros((K_total, n_fpc))
    scores[:, live] = raw[:, live] / sd[live]
    loadings[:, live] = Vt[:n_fpc][live].T * sd[live]

    return scores, loadings
