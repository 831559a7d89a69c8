"""Provides `OrdinalFunctionalDataset` and its CSV reader / writer."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import os
import warnings
from dataclasses import field, dataclass

import numpy as np
import pandas as pd

from OPFRM.core.exceptions import DatasetFormatError


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class OrdinalFunctionalDataset:
    """
    Ordinal functional outcomes on a common time grid with scalar covariates.

    Parameters
    ----------
    outcomes : array-like
        N x T integer matrix with entries in {0, ..., L-1}.
    covariates : array-like
        N x P real matrix. No intercept column: the cut points play that role.
    time_grid : array-like
        Length-T strictly increasing grid shared by all subjects.
    n_levels : int
        Number of ordinal levels L >= 2.
    notes : tuple
        Warnings recorded while loading.
    """

    outcomes: np.ndarray
    covariates: np.ndarray
    time_grid: np.ndarray
    n_levels: int
    notes: tuple = field(default=())

    def __post_init__(self):

        y = np.asarray(self.outcomes)
        if y.ndim != 2:
            raise ValueError(f"outcomes must be 2-d, got shape {y.shape}.")

        if not np.issubdtype(y.dtype, np.integer):
            if not np.all(np.isfinite(y)) or np.any(y != np.round(y)):
                raise ValueError("outcomes must be integers.")

        x = np.asarray(self.covariates, dtype=float)
        if x.ndim == 1:
            x = x[:, None]

        grid = np.asarray(self.time_grid, dtype=float).ravel()
        N, T = y.shape

        if x.shape[0] != N:
            raise ValueError(
                f"covariates have {x.shape[0]} rows, outcomes have {N}."
            )

        if grid.size != T:
            raise ValueError(
                f"time_grid has {grid.size} points, expected {T}."
            )

        if T > 1 and np.any(np.diff(grid) <= 0):
            raise ValueError("time_grid must be strictly increasing.")

        L = int(self.n_levels)
        if L < 2:
            raise ValueError(f"n_levels must be at least 2, got {L}.")

        if y.size and (y.min() < 0 or y.max() > L - 1):
            raise ValueError(
                f"outcome levels must lie in [0, {L - 1}], found "
                f"[{y.min()}, {y.max()}]."
            )

        object.__setattr__(self, "outcomes", _frozen(y, np.int64))
        object.__setattr__(self, "covariates", _frozen(x, float))
        object.__setattr__(self, "time_grid", _frozen(grid, float))
        object.__setattr__(self, "n_levels", L)
        object.__setattr__(self, "notes", tuple(self.notes))

    @property
    def N(self):
        """Number of subjects."""
        return self.outcomes.shape[0]

    @property
    def T(self):
        """Number of time points."""
        return self.outcomes.shape[1]

    @property
    def P(self):
        """Number of covariates."""
        return self.covariates.shape[1]

    def subset(self, rows):
        """
        Returns the dataset restricted to subjects `rows`. `n_levels` is kept
        so that folds missing a level still share the full category set.
        """

        rows = np.asarray(rows)
        return OrdinalFunctionalDataset(
            self.outcomes[rows],
            self.covariates[rows],
            self.time_grid,
            self.n_levels,
            self.notes,
        )

    def centered(self, columns=None):
        """
        Returns a copy with the selected covariate columns mean-centered.

        Parameters
        ----------
        columns : list | None
            Column indices to center. Default: every column that is not a
            0/1 indicator.
        """

        x = np.array(self.covariates)
        if columns is None:
            columns = [
                p
                for p in range(self.P)
                if not np.all(np.isin(x[:, p], (0.0, 1.0)))
            ]

        for p in columns:
            x[:, p] -= x[:, p].mean()

        return OrdinalFunctionalDataset(
            self.outcomes, x, self.time_grid, self.n_levels, self.notes
        )

    def level_counts(self):
        """Returns the count of each level 0..L-1."""

        return np.bincount(self.outcomes.ravel(), minlength=self.n_levels)

    def equals(self, other):
        """Exact equality of all arrays and the level count."""

        return (
            isinstance(other, OrdinalFunctionalDataset)
            and self.n_levels == other.n_levels
            and np.array_equal(self.outcomes, other.outcomes)
            and np.array_equal(self.covariates, other.covariates)
            and np.array_equal(self.time_grid, other.time_grid)
        )


def _read_matrix(path):
    """Reads a headerless comma-separated matrix, rejecting ragged rows."""

    if not os.path.isfile(path):
        raise FileNotFoundError(f"No such file: '{path}'.")

    try:
        df = pd.read_csv(path, header=None, skipinitialspace=True)

    except pd.errors.EmptyDataError:
        raise DatasetFormatError(path, "file is empty")

    except pd.errors.ParserError as e:
        raise DatasetFormatError(path, f"ragged rows ({e})")

    if df.isnull().values.any():
        raise DatasetFormatError(path, "ragged rows or empty cells")

    try:
        return df.to_numpy(dtype=float)

    except ValueError:
        raise DatasetFormatError(path, "non-numeric cell")


def read_grid(path):
    """
    Reads a time grid stored as one row or one column.

    Raises
    ------
    DatasetFormatError
        The grid is not strictly increasing.
    """

    grid = _read_matrix(path).ravel()
    if np.any(np.diff(grid) <= 0):
        raise DatasetFormatError(path, "grid not strictly increasing")

    return grid


def load_dataset(outcome_path, covariate_path, grid_path=None, n_levels=None):
    """
    Loads and validates an ordinal functional dataset from CSV files.

    Parameters
    ----------
    outcome_path : str
        N x T integer matrix, comma-separated, no header.
    covariate_path : str
        N x P real matrix, comma-separated, no header.
    grid_path : str | None
        Optional one-column time grid. Default grid is 1..T.
    n_levels : int | None
        Override for L. Default: 1 + max observed level.

    Returns
    -------
    OrdinalFunctionalDataset

    Raises
    ------
    DatasetFormatError
        Ragged rows, non-integer outcomes, row-count mismatch or a bad grid.
    """

    y = _read_matrix(outcome_path)
    if np.any(y != np.round(y)):
        raise DatasetFormatError(outcome_path, "non-integer outcome cell")

    if y.min() < 0:
        raise DatasetFormatError(outcome_path, "negative outcome level")

    y = y.astype(np.int64)
    x = _read_matrix(covariate_path)
    if x.shape[0] != y.shape[0]:
        raise DatasetFormatError(
            covariate_path,
            f"{x.shape[0]} rows but the outcome file has {y.shape[0]}",
        )

    if grid_path is None:
        grid = np.arange(1, y.shape[1] + 1, dtype=float)

    else:
        grid = read_grid(grid_path)
        if grid.size != y.shape[1]:
            raise DatasetFormatError(
                grid_path, f"{grid.size} points but T = {y.shape[1]}"
            )

    L = int(y.max()) + 1 if n_levels is None else int(n_levels)
    if L < 2:
        L = 2

    notes = []
    missing = np.setdiff1d(np.arange(L), np.unique(y))
    if missing.size:
        msg = (
            f"Outcome levels {missing.tolist()} never occur in "
            f"'{outcome_path}'; they are kept as empty categories of L={L}."
        )
        warnings.warn(msg)
        notes.append(msg)

    try:
        return OrdinalFunctionalDataset(y, x, grid, L, tuple(notes))

    except ValueError as e:
        raise DatasetFormatError(outcome_path, str(e))


def write_dataset(data, outcome_path, covariate_path, grid_path=None):
    """
    Writes `data` in the format read by `load_dataset`.

    Parameters
    ----------
    data : OrdinalFunctionalDataset
    outcome_path : str
    covariate_path : str
    grid_path : str | None
        Grid is written only when a path is given.
    """

    from OPFRM.config import atomic_write

    frames = [
        (outcome_path, pd.DataFrame(data.outcomes)),
        (covariate_path, pd.DataFrame(data.covariates)),
    ]
    if grid_path is not None:
        frames.append((grid_path, pd.DataFrame(data.time_grid)))

    for path, df in frames:
        with atomic_write(path) as f:
            df.to_csv(f, header=False, index=False, float_format="%.17g")
