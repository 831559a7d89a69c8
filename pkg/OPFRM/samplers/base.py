"""Provides the `BaseSampler` class."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import time
from abc import ABC, abstractmethod
from copy import deepcopy

import numpy as np
from benedict import benedict

from OPFRM.latent import sample_latent, sample_cutpoints, initial_latent_state
from OPFRM.core.draws import PosteriorDraws
from OPFRM.core.model import ModelConfig
from OPFRM.core.random import rng_stream
from OPFRM.core.defaults import hyperparameters
from OPFRM.core.exceptions import MissingInputs, InvalidModelConfig


def inverse_gamma(shape, rate, rng):
    """Draws from Inverse-Gamma(shape, rate), vectorized over arrays."""

    return 1.0 / rng.gamma(shape, 1.0 / np.asarray(rate, dtype=float))


class BaseSampler(ABC):
    """
    Base Sampler Class.

    This class is not intended to be instantiated, but defines the Gibbs
    sweep shared by every sampler: latent update, cut-point update, then the
    basis-specific blocks in `update`. Subclasses set `expected_config`,
    `bases` and `hyper_key` and implement `initialize`, `update`,
    `mean_matrix` and `data_scale_beta`.

    Parameters
    ----------
    data : OrdinalFunctionalDataset
    config : dict
        Run configuration with a `model` section; see `expected_config`.
    verbose : bool (optional)
        Print progress every `progress_interval` iterations. Default: False.
    """

    expected_config = None
    bases = ()
    hyper_key = None
    progress_interval = 100

    def __init__(self, data, config, verbose=False):

        if isinstance(config, ModelConfig):
            config = {"model": config.to_dict()}

        self.config = self.validate_config(config)
        self.model = ModelConfig.from_dict(dict(self.config["model"]))
        if self.model.basis not in self.bases:
            raise InvalidModelConfig(
                "basis",
                self.model.basis,
                f"'{type(self).__name__}' handles {self.bases}",
            )

        self.data = data
        self.verbose = verbose
        self.hyper = self._merge_hyperparameters()

        self.rng = rng_stream(self.model.seed, 0)
        self.latent = initial_latent_state(data.outcomes, data.n_levels)
        self.draws = None
        self.runtime = None
        self._logs = []
        self._start = None

    def _merge_hyperparameters(self):

        merged = deepcopy(hyperparameters.get(self.hyper_key, {}))
        merged.update(self.config.get(self.hyper_key, None) or {})
        return merged

    @classmethod
    def _check_keys(cls, expected, config):
        """
        Basic recursive key check.

        Parameters
        ----------
        expected : dict
            Expected config.
        config : dict
            Possible sampler config.
        """

        missing = []

        for k, v in expected.items():

            if isinstance(v, str) and "optional" in v:
                continue

            if isinstance(v, dict):
                c = config.get(k, {})
                if not isinstance(c, dict):
                    raise TypeError(f"'{k}' must be type 'dict'.")

                _m = cls._check_keys(v, c)
                m = [f"{k}.{i}" for i in _m]
                missing.extend(m)
                continue

            c = config.get(k, None)
            if c is None:
                missing.append(k)

        return missing

    def validate_config(self, config):
        """
        Validates `config` against `self.expected_config`.

        Parameters
        ----------
        config : dict
            Input config.

        Raises
        ------
        MissingInputs
        """

        expected = deepcopy(getattr(self, "expected_config", None))
        if expected is None:
            raise AttributeError(f"'expected_config' not set for '{self}'.")

        missing = self._check_keys(expected, config)

        if missing:
            raise MissingInputs(missing)

        else:
            return benedict(deepcopy(config))

    def log(self, event, **kwargs):
        """Appends a log record with the elapsed wall-clock time."""

        elapsed = 0.0 if self._start is None else time.time() - self._start
        self._logs.append({"event": event, "elapsed": elapsed, **kwargs})

    @property
    def logs(self):
        """Returns list of log records."""
        return self._logs

    @property
    def X(self):
        return self.data.covariates

    @abstractmethod
    def initialize(self):
        """Sets the starting chain state from the initial latent values."""

        pass

    @abstractmethod
    def update(self, iteration):
        """Updates every basis-specific block once."""

        pass

    @abstractmethod
    def mean_matrix(self):
        """Returns the current N x T latent mean on the data scale."""

        pass

    @abstractmethod
    def data_scale_beta(self):
        """Returns the current P x T coefficient curves."""

        pass

    def run(self):
        """
        Runs `n_samples` Gibbs sweeps and stores the draws kept after burn-in
        in `self.draws`.

        Returns
        -------
        PosteriorDraws
        """

        self._start = time.time()
        self.initialize()
        self.log("initialize", iteration=0)

        m = self.model
        beta = np.empty((m.n_retained, self.data.P, self.data.T))
        cuts = np.empty((m.n_retained, self.data.n_levels - 1))
        outcomes = self.data.outcomes

        for it in range(m.n_samples):

            self.latent.y_star = sample_latent(
                self.latent, self.mean_matrix(), outcomes, self.rng
            )
            self.latent.cuts = sample_cutpoints(
                self.latent, outcomes, self.rng
            )
            self.update(it)

            if it >= m.n_burn:
                beta[it - m.n_burn] = self.data_scale_beta()
                cuts[it - m.n_burn] = self.latent.cuts.values

            if it + 1 == m.n_burn:
                self.log("burn_in", iteration=it + 1)

            if self.verbose and (it + 1) % self.progress_interval == 0:
                elapsed = time.time() - self._start
                print(f"{it + 1}/{m.n_samples} iterations: {elapsed:.2f}s")

        self.runtime = time.time() - self._start
        self.log("complete", iteration=m.n_samples)

        self.draws = PosteriorDraws(
            beta, cuts, m, self.data.time_grid, self.runtime
        )
        return self.draws
