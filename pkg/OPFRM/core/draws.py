"""Provides `PosteriorDraws` and its on-disk format."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import os
import json
from dataclasses import field, dataclass

import numpy as np
import pandas as pd

from OPFRM.config import atomic_write
from OPFRM.core.model import ModelConfig

BETA_FILE = "beta_draws.csv"
CUT_FILE = "cut_draws.csv"
META_FILE = "draws_meta.json"


@dataclass(frozen=True, eq=False)
class PosteriorDraws:
    """
    Retained posterior draws on the data scale.

    Parameters
    ----------
    beta_draws : np.ndarray
        M x P x T coefficient curves, M = n_samples - n_burn.
    cut_draws : np.ndarray
        M x (L-1) cut points, each row strictly increasing from 0.
    meta : ModelConfig
        Config that produced the draws.
    time_grid : np.ndarray
        Length-T grid.
    runtime : float
        Wall-clock seconds spent sampling.
    """

    beta_draws: np.ndarray
    cut_draws: np.ndarray
    meta: ModelConfig
    time_grid: np.ndarray
    runtime: float = field(default=0.0)

    def __post_init__(self):

        beta = np.array(self.beta_draws, dtype=float)
        cuts = np.array(self.cut_draws, dtype=float)
        if cuts.ndim == 1:
            cuts = cuts[:, None]

        if beta.ndim != 3:
            raise ValueError(
                f"beta_draws must be M x P x T, got {beta.shape}."
            )

        if cuts.shape[0] != beta.shape[0]:
            raise ValueError("beta_draws and cut_draws differ in draw count.")

        if cuts.size and np.any(cuts[:, 0] != 0.0):
            raise ValueError("First cut point must be 0 in every draw.")

        if np.any(np.diff(cuts, axis=1) <= 0):
            raise ValueError("Cut points must be strictly increasing.")

        grid = np.array(self.time_grid, dtype=float).ravel()
        if grid.size != beta.shape[2]:
            raise ValueError("time_grid length does not match beta_draws.")

        for a in (beta, cuts, grid):
            a.setflags(write=False)

        object.__setattr__(self, "beta_draws", beta)
        object.__setattr__(self, "cut_draws", cuts)
        object.__setattr__(self, "time_grid", grid)
        object.__setattr__(self, "runtime", float(self.runtime))

    @property
    def M(self):
        return self.beta_draws.shape[0]

    @property
    def P(self):
        return self.beta_draws.shape[1]

    @property
    def T(self):
        return self.beta_draws.shape[2]

    @property
    def n_levels(self):
        return self.cut_draws.shape[1] + 1

    def posterior_mean(self):
        """Returns the P x T posterior mean curves."""
        return self.beta_draws.mean(axis=0)

    def to_frame(self):
        """
        Returns the coefficient draws as a DataFrame with one row per draw
        and columns `b{p}_t{t}`, t-major within p.
        """

        cols = [f"b{p}_t{t}" for p in range(self.P) for t in range(self.T)]
        return pd.DataFrame(self.beta_draws.reshape(self.M, -1), columns=cols)

    def save(self, directory):
        """
        Writes the draws to `directory` as two CSV files and a JSON manifest.
        Wall-clock runtime is left out so repeated fits write identical files.

        Parameters
        ----------
        directory : str
        """

        cuts = pd.DataFrame(
            self.cut_draws,
            columns=[f"c{i + 1}" for i in range(self.n_levels - 1)],
        )
        meta = {
            "config": self.meta.to_dict(),
            "time_grid": self.time_grid.tolist(),
            "shape": [self.M, self.P, self.T],
        }

        with atomic_write(os.path.join(directory, BETA_FILE)) as f:
            self.to_frame().to_csv(f, index=False, float_format="%.17g")

        with atomic_write(os.path.join(directory, CUT_FILE)) as f:
            cuts.to_csv(f, index=False, float_format="%.17g")

        with atomic_write(os.path.join(directory, META_FILE)) as f:
            json.dump(meta, f, indent=2, sort_keys=True)

    @classmethod
    def load(cls, directory):
        """
        Reads draws written by `save`.

        Parameters
        ----------
        directory : str

        Returns
        -------
        PosteriorDraws
        """

        with open(os.path.join(directory, META_FILE), "r") as f:
            meta = json.load(f)

        M, P, T = meta["shape"]
        beta = pd.read_csv(os.path.join(directory, BETA_FILE)).to_numpy(float)
        cuts = pd.read_csv(os.path.join(directory, CUT_FILE)).to_numpy(float)

        return cls(
            beta.reshape(M, P, T),
            cuts,
            ModelConfig.from_dict(meta["config"]),
            meta["time_grid"],
        )
