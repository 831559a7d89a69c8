"""Provides cubic B-spline designs with composite and O'Sullivan penalties."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


from dataclasses import dataclass

import numpy as np
from scipy.interpolate import BSpline

from OPFRM.core.exceptions import SplineBasisError

DEGREE = 3


@dataclass(frozen=True, eq=False)
class SplineBasis:
    """
    Cubic B-spline design and roughness penalty on a time grid.

    Parameters
    ----------
    kind : str
        'bspline' or 'ospline'.
    design : np.ndarray
        T x K_total matrix Theta.
    penalty : np.ndarray
        K_total x K_total symmetric positive semidefinite matrix Delta.
    knots : np.ndarray
        Full knot vector with repeated boundary knots.
    """

    kind: str
    design: np.ndarray
    penalty: np.ndarray
    knots: np.ndarray

    def __post_init__(self):
        for a in (self.design, self.penalty, self.knots):
            a.setflags(write=False)

    @property
    def K_total(self):
        return self.design.shape[1]

    @property
    def T(self):
        return self.design.shape[0]

    def evaluate(self, coefficients):
        """Maps (..., K_total) coefficients to (..., T) curves."""

        return np.asarray(coefficients) @ self.design.T


def spline_knots(grid, K):
    """
    Returns the cubic knot vector with `K` equally spaced interior knots over
    the range of `grid`, boundary knots repeated `DEGREE + 1` times.

    Parameters
    ----------
    grid : np.ndarray
    K : int
        Number of interior knots, at least 2.

    Raises
    ------
    SplineBasisError
    """

    grid = np.asarray(grid, dtype=float).ravel()
    if K < 2:
        raise SplineBasisError(K, "at least 2 interior knots are required")

    if grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise SplineBasisError(K, "grid must be strictly increasing, T >= 2")

    a, b = grid[0], grid[-1]
    interior = np.linspace(a, b, K + 2)[1:-1]

    return np.concatenate(
        (np.repeat(a, DEGREE + 1), interior, np.repeat(b, DEGREE + 1))
    )


def _design(grid, knots):
    grid = np.asarray(grid, dtype=float).ravel()
    return BSpline.design_matrix(grid, knots, DEGREE).toarray()


def second_difference_penalty(n):
    """Returns D2'D2 for `n` coefficients."""

    D = np.diff(np.eye(n), n=2, axis=0)
    return D.T @ D


def bspline_design(grid, K, eta=0.01):
    """
    Cubic B-spline basis with the composite penalty
    `eta * I + (1 - eta) * D2'D2`.

    Parameters
    ----------
    grid : np.ndarray
        Strictly increasing time grid.
    K : int
        Interior knots.
    eta : float
        Ridge weight in (0, 1).

    Returns
    -------
    SplineBasis
    """

    if not 0.0 < eta < 1.0:
        raise SplineBasisError(K, f"eta = {eta} must lie in (0, 1)")

    knots = spline_knots(grid, K)
    design = _design(grid, knots)
    n = design.shape[1]
    penalty = eta * np.eye(n) + (1 - eta) * second_difference_penalty(n)

    return SplineBasis("bspline", design, penalty, knots)


def ospline_penalty(knots):
    """
    Exact integrated squared second-derivative penalty of the cubic B-splines
    on `knots`. Second derivatives are piecewise linear, so Simpson's rule on
    every knot interval integrates each product exactly.

    Parameters
    ----------
    knots : np.ndarray

    Returns
    -------
    np.ndarray
        K_total x K_total symmetric matrix.
    """

    n = knots.size - DEGREE - 1
    d2 = BSpline(knots, np.eye(n), DEGREE).derivative(2)
    breaks = np.unique(knots)

    lo, hi = breaks[:-1], breaks[1:]
    h = hi - lo
    f_lo, f_mid, f_hi = d2(lo), d2((lo + hi) / 2), d2(hi)

    penalty = (
        np.einsum("i,ij,ik->jk", h / 6, f_lo, f_lo)
        + np.einsum("i,ij,ik->jk", 4 * h / 6, f_mid, f_mid)
        + np.einsum("i,ij,ik->jk", h / 6, f_hi, f_hi)
    )

    return (penalty + penalty.T) / 2


def ospline_design(grid, K):
    """
    Cubic B-spline basis with the O'Sullivan penalty: the exact integral of
    products of basis second derivatives over the grid range.

    Parameters
    ----------
    grid : np.ndarray
    K : int
        Interior knots.

    Returns
    -------
    SplineBasis
    """

    knots = spline_knots(grid, K)
    return SplineBasis(
        "ospline", _design(grid, knots), ospline_penalty(knots), knots
    )


def spline_basis(kind, grid, K, eta=0.01):
    """Builds the `kind` basis, 'bspline' or 'ospline'."""

    if kind == "bspline":
        return bspline_design(grid, K, eta)

    if kind == "ospline":
        return ospline_design(grid, K)

    raise ValueError(f"Unknown spline kind '{kind}'.")
