"""
Simulated ordinal functional datasets: true coefficient curves, correlated
latent errors and thresholding into ordinal levels.
"""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


from dataclasses import fields, asdict, dataclass

import numpy as np
from scipy import signal

from OPFRM.latent import CutPoints, category_probabilities
from OPFRM.core.data import OrdinalFunctionalDataset
from OPFRM.core.random import MAX_SEED
from OPFRM.core.exceptions import InvalidModelConfig

SETTINGS = ("sigmoidal", "seasonal", "decay", "peak", "null")
STRUCTURES = ("independent", "exponential", "compound_symmetric")
DEFAULT_RHO = {
    "independent": 0.0,
    "exponential": 0.5,
    "compound_symmetric": 0.3,
}
CUT_SPACING = 0.8


@dataclass(frozen=True)
class SimulationScenario:
    """
    Data-generating scenario for a replicate study.

    Parameters
    ----------
    setting : str
        True curve, one of `SETTINGS`.
    cov_structure : str
        Latent error structure, one of `STRUCTURES`.
    n_subjects : int
        Default: 40.
    n_timepoints : int
        Default: 256.
    n_levels : int
        Default: 4.
    cut_truth : tuple (optional)
        L-1 increasing cut points starting at 0. Default: spaced by 0.8.
    rho : float (optional)
        Error correlation in [0, 1). Default: from `DEFAULT_RHO`.
    n_replicates : int
        Default: 200.
    seed : int
        Default: 0.
    amplitude : float
        Multiplier on the true curve. Default: 1.0.
    """

    setting: str
    cov_structure: str
    n_subjects: int = 40
    n_timepoints: int = 256
    n_levels: int = 4
    cut_truth: tuple = None
    rho: float = None
    n_replicates: int = 200
    seed: int = 0
    amplitude: float = 1.0

    def __post_init__(self):

        if self.setting not in SETTINGS:
            raise InvalidModelConfig(
                "setting", self.setting, f"must be one of {SETTINGS}"
            )

        if self.cov_structure not in STRUCTURES:
            raise InvalidModelConfig(
                "cov_structure",
                self.cov_structure,
                f"must be one of {STRUCTURES}",
            )

        for key, minimum in (
            ("n_subjects", 1),
            ("n_timepoints", 1),
            ("n_levels", 2),
            ("n_replicates", 1),
        ):
            value = getattr(self, key)
            if int(value) != value or value < minimum:
                raise InvalidModelConfig(
                    key, value, f"must be an integer >= {minimum}"
                )

            object.__setattr__(self, key, int(value))

        if not 0 <= int(self.seed) <= MAX_SEED:
            raise InvalidModelConfig("seed", self.seed, "out of range")

        cuts = self.cut_truth
        if cuts is None:
            cuts = CUT_SPACING * np.arange(self.n_levels - 1)

        cuts = tuple(float(c) for c in np.ravel(cuts))
        if len(cuts) != self.n_levels - 1:
            raise InvalidModelConfig(
                "cut_truth", cuts, f"needs {self.n_levels - 1} values"
            )

        if cuts[0] != 0.0 or np.any(np.diff(cuts) <= 0):
            raise InvalidModelConfig(
                "cut_truth", cuts, "must start at 0 and strictly increase"
            )

        rho = self.rho
        if rho is None:
            rho = DEFAULT_RHO[self.cov_structure]

        if not 0 <= rho < 1:
            raise InvalidModelConfig("rho", rho, "must lie in [0, 1)")

        object.__setattr__(self, "cut_truth", cuts)
        object.__setattr__(self, "rho", float(rho))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "amplitude", float(self.amplitude))

    @classmethod
    def from_dict(cls, data):
        """
        Builds a scenario from a dict, rejecting unknown keys.

        Parameters
        ----------
        data : dict
        """

        allowed = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise InvalidModelConfig(
                unknown[0], data[unknown[0]], "unknown scenario key"
            )

        return cls(**data)

    def to_dict(self):
        out = asdict(self)
        out["cut_truth"] = list(self.cut_truth)
        return out

    def replace(self, **kwargs):
        return type(self)(**{**asdict(self), **kwargs})


def rescale_grid(time_grid):
    """Maps a strictly increasing grid linearly onto [0, 1]."""

    grid = np.asarray(time_grid, dtype=float)
    if grid.size == 1:
        return np.zeros(1)

    return (grid - grid[0]) / (grid[-1] - grid[0])


def true_curve(setting, s, amplitude=1.0):
    """
    Coefficient curve of a simulation setting.

    Parameters
    ----------
    setting : str
        One of `SETTINGS`.
    s : np.ndarray
        Points in [0, 1].
    amplitude : float (optional)

    Returns
    -------
    np.ndarray
    """

    s = np.asarray(s, dtype=float)

    if setting == "sigmoidal":
        curve = 1.0 / (1.0 + np.exp(-10.0 * (s - 0.5)))

    elif setting == "seasonal":
        curve = 0.8 * np.sin(2 * np.pi * s)

    elif setting == "decay":
        curve = np.exp(-3.0 * s)

    elif setting == "peak":
        curve = np.exp(-((s - 0.5) ** 2) / (2 * 0.1**2))

    elif setting == "null":
        curve = np.zeros_like(s)

    else:
        raise InvalidModelConfig(
            "setting", setting, f"must be one of {SETTINGS}"
        )

    return amplitude * curve


def latent_error_draw(structure, rho, T, rng, size=None):
    """
    Gaussian latent errors with unit marginal variance.

    Parameters
    ----------
    structure : str
        independent: iid. exponential: Corr(e_t, e_s) = rho^|t-s|.
        compound_symmetric: every pair has correlation rho.
    rho : float
    T : int
    rng : np.random.Generator
    size : int (optional)
        Number of curves. Default: a single length-T curve.

    Returns
    -------
    np.ndarray
        Shape (T,) or (size, T).
    """

    shape = (T,) if size is None else (size, T)
    z = rng.standard_normal(shape)

    if structure == "independent":
        return z

    if structure == "exponential":
        scale = np.sqrt(1.0 - rho**2)
        z[..., 0] /= scale
        return signal.lfilter([scale], [1.0, -rho], z, axis=-1)

    if structure == "compound_symmetric":
        shared = rng.standard_normal(shape[:-1] + (1,))
        return np.sqrt(rho) * shared + np.sqrt(1.0 - rho) * z

    raise InvalidModelConfig(
        "cov_structure", structure, f"must be one of {STRUCTURES}"
    )


def generate_dataset(scenario, rng, method="threshold"):
    """
    Draws one dataset from `scenario`.

    Covariates are standard normal. With `method="threshold"` the latent
    curves x_i beta(t) + e_i(t) are cut at `cut_truth`. With
    `method="multinomial"` each outcome is drawn independently from the
    probit category probabilities, which is only equivalent for the
    independent structure.

    Parameters
    ----------
    scenario : SimulationScenario
    rng : np.random.Generator
    method : str (optional)
        "threshold" or "multinomial". Default: "threshold".

    Returns
    -------
    data : OrdinalFunctionalDataset
    truth : np.ndarray
        Length-T true coefficient curve.
    """

    N, T = scenario.n_subjects, scenario.n_timepoints
    grid = np.arange(1, T + 1, dtype=float)
    s = rescale_grid(grid)
    truth = true_curve(scenario.setting, s, scenario.amplitude)

    x = rng.standard_normal((N, 1))
    eta = x * truth[None, :]
    cuts = np.asarray(scenario.cut_truth)

    if method == "threshold":
        errors = latent_error_draw(
            scenario.cov_structure, scenario.rho, T, rng, size=N
        )
        outcomes = np.searchsorted(cuts, eta + errors, side="left")

    elif method == "multinomial":
        if scenario.cov_structure != "independent":
            raise ValueError(
                "Multinomial generation requires the independent structure, "
                f"got '{scenario.cov_structure}'."
            )

        probs = category_probabilities(eta, CutPoints(cuts))
        upper = np.cumsum(probs, axis=-1)[..., :-1]
        u = rng.random((N, T))
        outcomes = (u[..., None] >= upper).sum(axis=-1)

    else:
        raise ValueError(f"Unknown generation method '{method}'.")

    data = OrdinalFunctionalDataset(outcomes, x, grid, scenario.n_levels)
    return data, truth


def run_study(scenario, models, **kwargs):
    """
    Runs a replicate study of `models` under `scenario`.

    Parameters
    ----------
    scenario : SimulationScenario
    models : list
        `ModelConfig` instances or model dicts.
    kwargs
        Passed to `StudyManager`.

    Returns
    -------
    pd.DataFrame
        Per-model aggregate table.
    """

    from OPFRM.parametric import StudyManager

    manager = StudyManager(scenario, models, **kwargs)
    manager.run()
    return manager.table()
