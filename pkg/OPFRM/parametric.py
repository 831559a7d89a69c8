__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import os
import json
import time
import warnings
from copy import deepcopy
from random import sample
from itertools import product
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pandas as pd
from scipy import linalg
from statsmodels.stats.proportion import proportion_confint

from OPFRM.config import atomic_write
from OPFRM.manager import FitManager
from OPFRM.simulate import (
    SimulationScenario,
    true_curve,
    rescale_grid,
    generate_dataset,
)
from OPFRM.inference import CredibleBand, mise, coverage_metrics
from OPFRM.core.random import rng_stream, derive_seed
from OPFRM.core.library import (
    active_library,
    initialize_library,
    extract_library_specs,
)
from OPFRM.core.exceptions import (
    DegenerateDraws,
    CutPointOrderError,
    RankDeficientError,
    PrecisionNotPositiveDefinite,
)

REFERENCE_MODELS = (
    "bspline_k5",
    "bspline_k10",
    "ospline_k2",
    "ospline_k4",
    "symmlet_j6",
    "symmlet_j8",
)

# Sampler failures that exclude a single replicate instead of the study.
RUN_FAILURES = (
    DegenerateDraws,
    CutPointOrderError,
    RankDeficientError,
    PrecisionNotPositiveDefinite,
    linalg.LinAlgError,
    FloatingPointError,
)


def model_label(model):
    """
    Short label of a model dict, e.g. "ospline_K2" or "symmlet_J6".

    Parameters
    ----------
    model : dict
    """

    size = "J" if model["basis"] == "symmlet" else "K"
    return f"{model['basis']}_{size}{model['basis_size']}"


def _run_single(
    scenario, model, replicate, index, n_models, alpha, library_path=None
):
    """
    Fits model `index` to replicate `replicate` of `scenario`.

    Returns
    -------
    record : dict
    estimate : np.ndarray | None
        Posterior mean curve, None when the fit failed.
    """

    data, truth = generate_dataset(
        scenario, rng_stream(scenario.seed, replicate)
    )
    seed = derive_seed(scenario.seed, replicate * n_models + index)
    config = {"model": {**model, "seed": seed}}

    record = {
        "replicate": replicate,
        "model": model_label(model),
        "seed": seed,
    }

    start = time.time()
    try:
        manager = FitManager(config, data=data, library_path=library_path)
        draws = manager.run()
        band = CredibleBand.from_draws(draws.beta_draws[:, 0, :], alpha)

    except RUN_FAILURES as e:
        record.update(status=f"failed: {type(e).__name__}: {e}")
        return record, None

    metrics = coverage_metrics(band, truth)
    record.update(
        status="ok",
        mise=mise(band.center, truth),
        **vars(metrics),
        any_sig_joint=bool(band.sig_joint.any()),
        any_sig_pw=bool(band.sig_pw.any()),
        runtime=time.time() - start,
    )
    return record, band.center


class StudyManager:
    """Class for replicate simulation studies over a grid of models."""

    def __init__(
        self, scenario, models, alpha=0.05, jobs=1, library_path=None
    ):
        """
        Creates an instance of `StudyManager`.

        Parameters
        ----------
        scenario : SimulationScenario | dict
            Data-generating scenario.
        models : list
            Model dicts, `ModelConfig` instances or library model names.
        alpha : float (optional)
            Band level. Default: 0.05.
        jobs : int (optional)
            Worker processes. Default: 1.
        library_path : str (optional)
            The absolute path to the library. Default: the active library.
        """

        if library_path is not None:
            initialize_library(library_path)

        self.library_path = active_library()
        if isinstance(scenario, dict):
            scenario = SimulationScenario.from_dict(scenario)

        self.scenario = scenario
        self.models = [FitManager.resolve_model(m) for m in models]
        self.labels = [model_label(m) for m in self.models]
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"Duplicate models in study: {self.labels}.")

        self.alpha = alpha
        self.jobs = jobs
        self.results = None
        self.estimates = None
        self.truth = true_curve(
            scenario.setting,
            rescale_grid(np.arange(1, scenario.n_timepoints + 1)),
            scenario.amplitude,
        )

    @property
    def run_list(self):
        """Returns list of (replicate, model) runs."""

        runs = product(
            range(self.scenario.n_replicates), range(len(self.models))
        )
        return [{"replicate": r, "model": k} for r, k in runs]

    @property
    def num_runs(self):
        return len(self.run_list)

    def _args(self, run):
        return (
            self.scenario,
            self.models[run["model"]],
            run["replicate"],
            run["model"],
            len(self.models),
            self.alpha,
            self.library_path,
        )

    def _execute(self, runs, verbose=False):

        if self.jobs > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                futures = [
                    pool.submit(_run_single, *self._args(r)) for r in runs
                ]
                return [f.result() for f in futures]

        outputs = []
        start = time.time()
        for i, run in enumerate(runs):
            outputs.append(_run_single(*self._args(run)))
            if verbose:
                print(
                    f"{i + 1}/{len(runs)} runs elapsed time: "
                    f"{time.time() - start:.2f}s"
                )

        return outputs

    def run(self, verbose=False):
        """
        Runs every (replicate, model) combination and saves the per-run
        records to `self.results` and the posterior mean curves to
        `self.estimates`.
        """

        outputs = self._execute(self.run_list, verbose)

        self.results = pd.DataFrame([rec for rec, _ in outputs])
        self.estimates = {label: [] for label in self.labels}
        for rec, est in outputs:
            if est is not None:
                self.estimates[rec["model"]].append(est)

        self.estimates = {
            k: np.array(v).reshape(len(v), self.scenario.n_timepoints)
            for k, v in self.estimates.items()
        }

        failed = self.results.loc[self.results["status"] != "ok"]
        if len(failed):
            warnings.warn(
                f"{len(failed)} of {self.num_runs} study runs failed and "
                f"were excluded: {sorted(set(failed['status']))}"
            )

    def preview(self, num=10):
        """
        Runs a limited set of runs to preview the results and provide an
        estimate for total run time.

        Parameters
        ----------
        num : int
            Number to run.
        """

        start = time.time()
        if num > self.num_runs:
            to_run = self.run_list

        else:
            to_run = sample(self.run_list, num)

        outputs = self._execute(to_run)

        elapsed = time.time() - start
        estimate = (self.num_runs / len(to_run)) * elapsed
        print(f"{len(to_run)} runs elapsed time: {elapsed:.2f}s")
        print(f"{self.num_runs} runs estimated time: {estimate:.2f}s")

        return pd.DataFrame([rec for rec, _ in outputs])

    def _check_run(self):
        if self.results is None:
            raise RuntimeError("'StudyManager.run()' has not been called.")

    def table(self):
        """
        Per-model averages over successful replicates, with Wilson intervals
        for the share of replicates whose band covers the whole curve.

        Returns
        -------
        pd.DataFrame
        """

        self._check_run()

        rows = []
        for label in self.labels:
            runs = self.results.loc[self.results["model"] == label]
            ok = runs.loc[runs["status"] == "ok"]
            n_ok = len(ok)

            row = {
                "setting": self.scenario.setting,
                "cov_structure": self.scenario.cov_structure,
                "model": label,
                "n_ok": n_ok,
                "n_failed": len(runs) - n_ok,
            }

            if n_ok:
                for col in (
                    "mise",
                    "coverage_pw",
                    "coverage_joint",
                    "width_pw",
                    "width_joint",
                    "runtime",
                ):
                    row[col] = ok[col].mean()

                for col in ("covered_pw", "covered_joint", "any_sig_joint"):
                    row[col] = ok[col].astype(float).mean()

                lo, hi = proportion_confint(
                    int(ok["covered_joint"].sum()),
                    n_ok,
                    alpha=self.alpha,
                    method="wilson",
                )
                row.update(covered_joint_lo=lo, covered_joint_hi=hi)

            rows.append(row)

        return pd.DataFrame(rows)

    def wide_table(self, metric="mise"):
        """
        One row per (setting, cov_structure) with a column per model.

        Parameters
        ----------
        metric : str (optional)
            Column of `table()`. Default: "mise".
        """

        table = self.table()
        wide = table.pivot(
            index=["setting", "cov_structure"], columns="model", values=metric
        )
        return wide[self.labels]

    def manifest(self):
        """JSON-ready description of the study: inputs, seeds and failures."""

        self._check_run()
        failed = self.results.loc[self.results["status"] != "ok"]
        return {
            "scenario": self.scenario.to_dict(),
            "models": deepcopy(self.models),
            "alpha": self.alpha,
            "n_runs": self.num_runs,
            "n_failed": len(failed),
            "failures": failed[["replicate", "model", "status"]].to_dict(
                orient="records"
            ),
            "seeds": [int(s) for s in self.results["seed"]],
        }

    def save(self, directory, plot=False):
        """
        Writes the study outputs to `directory`: `study_table.csv` (rows
        setting x structure, columns per model, MISE), `study_summary.csv`
        (all aggregate metrics), `study_runs.csv`, `study_manifest.json`
        and `study_log.csv` with per-run timings.

        Parameters
        ----------
        directory : str
        plot : bool (optional)
            Also write one replicate overlay figure per model.
        """

        self._check_run()
        os.makedirs(directory, exist_ok=True)

        timed = ["runtime"]
        table = self.table().drop(columns=timed, errors="ignore")
        runs = self.results.drop(columns=timed, errors="ignore")

        outputs = {
            "study_table.csv": self.wide_table("mise"),
            "study_summary.csv": table,
            "study_runs.csv": runs,
        }
        for name, df in outputs.items():
            index = name == "study_table.csv"
            with atomic_write(os.path.join(directory, name)) as f:
                df.to_csv(f, index=index, float_format="%.17g")

        with atomic_write(os.path.join(directory, "study_log.csv")) as f:
            log = self.results[["replicate", "model", "status"]]
            log.assign(runtime=self.results.get("runtime")).to_csv(
                f, index=False
            )

        path = os.path.join(directory, "study_manifest.json")
        with atomic_write(path) as f:
            json.dump(self.manifest(), f, indent=2, sort_keys=True)

        if plot:
            from OPFRM.plotting import plot_replicates

            grid = np.arange(1, self.scenario.n_timepoints + 1)
            for label, est in self.estimates.items():
                if len(est):
                    plot_replicates(
                        est,
                        self.truth,
                        grid,
                        os.path.join(directory, f"replicates_{label}.png"),
                        title=label,
                    )

    @classmethod
    def from_config(cls, data):
        """
        Creates a `StudyManager` from a study config with a `scenario`
        section (dict or library scenario name), an optional `models` list
        (dicts or library model names, default: the six reference models),
        an optional `overrides` dict applied to every model and optional
        `alpha`, `jobs` and `library_path` entries.

        Parameters
        ----------
        data : dict
        """

        data = deepcopy(data)
        if data.get("library_path", None) is not None:
            initialize_library(data["library_path"])

        scenario = data.pop("scenario")
        if isinstance(scenario, str):
            scenario = extract_library_specs("scenarios", scenario)

        scenario = {**scenario, **data.pop("scenario_overrides", {})}

        overrides = data.pop("overrides", {})
        models = [
            {**FitManager.resolve_model(m), **overrides}
            for m in data.pop("models", REFERENCE_MODELS)
        ]

        return cls(scenario, models, **data)
