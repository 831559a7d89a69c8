__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import os
import json
from copy import deepcopy

import numpy as np
import pandas as pd
from benedict import benedict

from OPFRM.config import save_config, atomic_write
from OPFRM.latent import CutPoints, category_probabilities
from OPFRM.inference import summarize
from OPFRM.samplers import BaseSampler, SplineSampler, WaveletSampler
from OPFRM.core.data import load_dataset
from OPFRM.core.model import ModelConfig
from OPFRM.core.library import initialize_library, extract_library_specs
from OPFRM.core.exceptions import MissingInputs, SamplerNotFound

SUMMARY_FILE = "summary.json"
LOG_FILE = "fit_log.csv"
CONFIG_FILE = "config.yaml"


def band_file(p):
    return f"band_p{p}.csv"


def write_summary(draws, directory, alpha=0.05, plot=False):
    """
    Writes band tables and the JSON summary of `draws` to `directory`.

    Parameters
    ----------
    draws : PosteriorDraws
    directory : str
    alpha : float (optional)
    plot : bool (optional)
        Also write one band figure per covariate.

    Returns
    -------
    PosteriorSummary
    """

    os.makedirs(directory, exist_ok=True)
    summary = summarize(draws, alpha)

    for p in range(draws.P):
        path = os.path.join(directory, band_file(p))
        with atomic_write(path) as f:
            summary.band_frame(p).to_csv(f, index=False, float_format="%.17g")

    out = {
        **summary.to_dict(),
        "model": draws.meta.to_dict(),
        "n_draws": draws.M,
        "n_levels": draws.n_levels,
    }
    with atomic_write(os.path.join(directory, SUMMARY_FILE)) as f:
        json.dump(out, f, indent=2, sort_keys=True)

    if plot:
        from OPFRM.plotting import plot_band

        for p in range(draws.P):
            plot_band(
                summary.bands[p],
                draws.time_grid,
                os.path.join(directory, f"band_p{p}.png"),
                title=f"Covariate {p}",
            )

    return summary


class FitManager:
    """
    Fits one ordinal functional regression model.

    The sampler is chosen from the registered sampler classes by the
    `model.basis` entry of the config, or by name through an optional
    top-level `sampler` entry.
    """

    _samplers = (WaveletSampler, SplineSampler)

    def __init__(self, config, data=None, library_path=None, verbose=False):
        """
        Creates an instance of FitManager.

        Parameters
        ----------
        config : dict
            Run configuration with a `model` section and, when `data` is not
            given, a `data` section with `outcomes`, `covariates` and
            optional `grid`, `n_levels` and `center` entries.
        data : OrdinalFunctionalDataset (optional)
        library_path : str (optional)
            The absolute path to the model library. Default: the active
            library.
        verbose : bool (optional)
        """

        if library_path is not None:
            initialize_library(library_path)
        self._input = deepcopy(dict(config))
        self._input["model"] = self.resolve_model(
            self._input.get("model", None)
        )
        self.config = benedict(deepcopy(self._input))
        self.verbose = verbose

        if data is None:
            data = self.load_data(self.config)

        self.data = data
        self.sampler_class = self.resolve_sampler(self.config)
        self.sampler = None

    @staticmethod
    def load_data(config):
        """
        Reads the dataset named in the `data` section of `config`.

        Parameters
        ----------
        config : dict

        Returns
        -------
        OrdinalFunctionalDataset
        """

        section = config.get("data", None)
        if not section:
            raise MissingInputs(["data.outcomes", "data.covariates"])

        missing = [
            f"data.{k}" for k in ("outcomes", "covariates") if k not in section
        ]
        if missing:
            raise MissingInputs(missing)

        data = load_dataset(
            section["outcomes"],
            section["covariates"],
            section.get("grid", None),
            section.get("n_levels", None),
        )

        if section.get("center", False):
            data = data.centered()

        return data

    @staticmethod
    def resolve_model(model):
        """
        Returns a model dict from a dict, a `ModelConfig` or the name of a
        library item under `models`.
        """

        if model is None:
            raise MissingInputs(["model"])

        if isinstance(model, ModelConfig):
            return model.to_dict()

        if isinstance(model, str):
            return dict(extract_library_specs("models", model))

        return dict(model)

    @classmethod
    def register_sampler(cls, sampler):
        """
        Add a custom sampler to the `FitManager` class.

        Parameters
        ----------
        sampler : OPFRM.samplers.BaseSampler
        """

        if not isinstance(sampler, type) or not issubclass(
            sampler, BaseSampler
        ):
            raise ValueError(
                "Registered sampler must be a subclass of "
                "'OPFRM.samplers.BaseSampler'."
            )

        if sampler.__name__ in cls.sampler_dict():
            raise ValueError(
                f"A sampler with name '{sampler.__name__}' already exists."
            )

        cls._samplers = (*cls._samplers, sampler)

    @classmethod
    def sampler_dict(cls):
        """
        Returns dictionary of all samplers with format 'name': 'class'.
        """

        return {s.__name__: s for s in cls._samplers}

    @classmethod
    def resolve_sampler(cls, config):
        """
        Returns the sampler class for `config`.

        Raises
        ------
        SamplerNotFound
        """

        name = config.get("sampler", None)
        if name is not None:
            try:
                return cls.sampler_dict()[name]

            except KeyError:
                raise SamplerNotFound(name, list(cls.sampler_dict()))

        try:
            basis = config["model"]["basis"]

        except KeyError:
            raise MissingInputs(["model.basis"])

        # last registered wins so custom samplers can shadow built-ins
        for sampler in reversed(cls._samplers):
            if basis in sampler.bases:
                return sampler

        available = sorted({b for s in cls._samplers for b in s.bases})
        raise SamplerNotFound(basis, available)

    def run(self):
        """Runs the sampler and returns its `PosteriorDraws`."""

        config = {
            k: v
            for k, v in self._input.items()
            if k not in ("data", "sampler")
        }
        self.sampler = self.sampler_class(
            self.data, config, verbose=self.verbose
        )
        return self.sampler.run()

    def _check_run(self):
        if self.sampler is None or self.sampler.draws is None:
            raise RuntimeError("'FitManager.run()' has not been called.")

    @property
    def draws(self):
        """Posterior draws of the last run."""

        self._check_run()
        return self.sampler.draws

    @property
    def runtime(self):
        """Sampling wall-clock seconds."""

        self._check_run()
        return self.sampler.runtime

    @property
    def logs(self):
        """Returns sampler logs as a DataFrame."""

        self._check_run()
        return pd.DataFrame(self.sampler.logs)

    def summarize(self, alpha=0.05):
        """Returns the `PosteriorSummary` of the last run."""
        return summarize(self.draws, alpha)

    def predict_proba(self, covariates):
        """
        Posterior mean category probabilities for new subjects, averaging
        the probit probabilities of X beta(t) over the retained draws.

        Parameters
        ----------
        covariates : np.ndarray
            n x P.

        Returns
        -------
        np.ndarray
            n x T x L.
        """

        X = np.asarray(covariates, dtype=float)
        if X.ndim == 1:
            X = X[:, None]

        draws = self.draws
        if X.shape[1] != draws.P:
            raise ValueError(
                f"Expected {draws.P} covariate columns, got {X.shape[1]}."
            )

        total = np.zeros((X.shape[0], draws.T, draws.n_levels))
        for m in range(draws.M):
            total += category_probabilities(
                X @ draws.beta_draws[m], CutPoints(draws.cut_draws[m])
            )

        return total / draws.M

    def save(self, directory, alpha=0.05, plot=False):
        """
        Writes draws, band tables, summary, fit log and config to
        `directory`.

        Parameters
        ----------
        directory : str
        alpha : float (optional)
        plot : bool (optional)

        Returns
        -------
        PosteriorSummary
        """

        os.makedirs(directory, exist_ok=True)
        self.draws.save(directory)
        summary = write_summary(self.draws, directory, alpha, plot)

        logs = self.logs.assign(runtime=self.runtime)
        with atomic_write(os.path.join(directory, LOG_FILE)) as f:
            logs.to_csv(f, index=False)

        config = {k: v for k, v in self._input.items() if k != "data"}
        config["model"] = self.sampler.model.to_dict()
        save_config(
            config, os.path.join(directory, CONFIG_FILE), overwrite=True
        )

        return summary
