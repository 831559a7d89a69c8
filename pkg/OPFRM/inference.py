"""
Posterior summaries, credible bands, evaluation metrics and the
cross-validation harness.
"""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


from dataclasses import field, dataclass
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pandas as pd

from OPFRM.latent import CutPoints, predict_category
from OPFRM.core.library import active_library, initialize_library
from OPFRM.core.exceptions import (
    EmptyFoldError,
    DegenerateDraws,
    InsufficientDraws,
)

MIN_DRAWS = 20


def _as_draw_matrix(draws):

    draws = np.asarray(draws, dtype=float)
    if draws.ndim == 1:
        draws = draws[:, None]

    if draws.shape[0] < MIN_DRAWS:
        raise InsufficientDraws(draws.shape[0], MIN_DRAWS)

    return draws


def pointwise_band(draws, alpha=0.05):
    """
    Point-wise equal-tailed credible interval at every time point.

    Parameters
    ----------
    draws : np.ndarray
        M x T posterior draws, M >= 20.
    alpha : float

    Returns
    -------
    lower, upper : np.ndarray
    """

    draws = _as_draw_matrix(draws)
    lower, upper = np.quantile(draws, [alpha / 2, 1 - alpha / 2], axis=0)
    return lower, upper


def joint_band(draws, alpha=0.05):
    """
    Simultaneous band mean(t) +/- q * sd(t), where q is the 1 - alpha
    quantile over draws of max_t |draw(t) - mean(t)| / sd(t). Time points
    with zero posterior spread are left out of the maximum and get a
    zero-width band.

    Parameters
    ----------
    draws : np.ndarray
        M x T posterior draws, M >= 20.
    alpha : float

    Returns
    -------
    lower, upper : np.ndarray

    Raises
    ------
    DegenerateDraws
        No time point has positive spread.
    """

    draws = _as_draw_matrix(draws)
    center = draws.mean(axis=0)
    sd = draws.std(axis=0, ddof=1)

    live = sd > 0
    if not np.any(live):
        raise DegenerateDraws()

    z = np.abs(draws[:, live] - center[live]) / sd[live]
    q = np.quantile(z.max(axis=1), 1 - alpha)

    half = np.where(live, q * sd, 0.0)
    return center - half, center + half


@dataclass(frozen=True, eq=False)
class CredibleBand:
    """
    Posterior mean curve with point-wise and joint bands.

    The joint band is widened to the point-wise endpoints wherever the
    max-statistic band is narrower, and the point-wise band is widened to
    the mean where the mean falls outside it, so that
    `joint_lower <= pw_lower <= center <= pw_upper <= joint_upper`.
    """

    center: np.ndarray
    pw_lower: np.ndarray
    pw_upper: np.ndarray
    joint_lower: np.ndarray
    joint_upper: np.ndarray
    alpha: float
    degenerate: bool = field(default=False)

    @classmethod
    def from_draws(cls, draws, alpha=0.05):
        """
        Builds both bands from M x T draws.

        Parameters
        ----------
        draws : np.ndarray
        alpha : float

        Returns
        -------
        CredibleBand
        """

        draws = _as_draw_matrix(draws)
        center = draws.mean(axis=0)

        pw_lower, pw_upper = pointwise_band(draws, alpha)
        pw_lower = np.minimum(pw_lower, center)
        pw_upper = np.maximum(pw_upper, center)

        try:
            joint_lower, joint_upper = joint_band(draws, alpha)
            degenerate = False

        except DegenerateDraws:
            joint_lower, joint_upper = center.copy(), center.copy()
            degenerate = True

        return cls(
            center,
            pw_lower,
            pw_upper,
            np.minimum(joint_lower, pw_lower),
            np.maximum(joint_upper, pw_upper),
            float(alpha),
            degenerate,
        )

    @property
    def sig_pw(self):
        """Time points where the point-wise band excludes 0."""
        return (self.pw_lower > 0) | (self.pw_upper < 0)

    @property
    def sig_joint(self):
        """Time points where the joint band excludes 0."""
        return (self.joint_lower > 0) | (self.joint_upper < 0)

    def to_frame(self, time_grid):
        """
        Returns the plot-ready band table.

        Parameters
        ----------
        time_grid : np.ndarray

        Returns
        -------
        pd.DataFrame
            Columns t, center, pw_lo, pw_hi, joint_lo, joint_hi, sig_pw,
            sig_joint.
        """

        return pd.DataFrame(
            {
                "t": np.asarray(time_grid, dtype=float),
                "center": self.center,
                "pw_lo": self.pw_lower,
                "pw_hi": self.pw_upper,
                "joint_lo": self.joint_lower,
                "joint_hi": self.joint_upper,
                "sig_pw": self.sig_pw,
                "sig_joint": self.sig_joint,
            }
        )


def mise(estimate, truth):
    """
    Mean over the grid of squared differences.

    Parameters
    ----------
    estimate : np.ndarray
    truth : np.ndarray

    Returns
    -------
    float
    """

    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise ValueError(
            f"Estimate shape {estimate.shape} does not match truth "
            f"shape {truth.shape}."
        )

    return float(np.mean((estimate - truth) ** 2))


@dataclass(frozen=True)
class CoverageMetrics:
    """
    Coverage of a true curve by a `CredibleBand`.

    Parameters
    ----------
    coverage_pw, coverage_joint : float
        Share of time points where the truth lies in each band.
    covered_pw, covered_joint : bool
        Whether each band contains the whole true curve.
    width_pw, width_joint : float
        Mean band widths.
    """

    coverage_pw: float
    coverage_joint: float
    covered_pw: bool
    covered_joint: bool
    width_pw: float
    width_joint: float


def coverage_metrics(band, truth):
    """
    Compares `band` with the true curve.

    Parameters
    ----------
    band : CredibleBand
    truth : np.ndarray

    Returns
    -------
    CoverageMetrics
    """

    truth = np.asarray(truth, dtype=float)
    inside_pw = (band.pw_lower <= truth) & (truth <= band.pw_upper)
    inside_joint = (band.joint_lower <= truth) & (truth <= band.joint_upper)

    return CoverageMetrics(
        coverage_pw=float(inside_pw.mean()),
        coverage_joint=float(inside_joint.mean()),
        covered_pw=bool(inside_pw.all()),
        covered_joint=bool(inside_joint.all()),
        width_pw=float(np.mean(band.pw_upper - band.pw_lower)),
        width_joint=float(np.mean(band.joint_upper - band.joint_lower)),
    )


@dataclass(frozen=True, eq=False)
class PosteriorSummary:
    """
    Bands for every covariate plus cut-point summaries.

    Parameters
    ----------
    bands : list
        One `CredibleBand` per covariate.
    cuts : pd.DataFrame
        Posterior mean and equal-tailed interval per cut point.
    time_grid : np.ndarray
    alpha : float
    """

    bands: list
    cuts: pd.DataFrame
    time_grid: np.ndarray
    alpha: float

    def band_frame(self, p):
        """Band table for covariate `p`."""
        return self.bands[p].to_frame(self.time_grid)

    def to_dict(self):
        """JSON-ready summary."""

        return {
            "alpha": self.alpha,
            "time_grid": np.asarray(self.time_grid).tolist(),
            "covariates": [
                {
                    "posterior_mean": b.center.tolist(),
                    "pw_lower": b.pw_lower.tolist(),
                    "pw_upper": b.pw_upper.tolist(),
                    "joint_lower": b.joint_lower.tolist(),
                    "joint_upper": b.joint_upper.tolist(),
                    "n_sig_pw": int(b.sig_pw.sum()),
                    "n_sig_joint": int(b.sig_joint.sum()),
                }
                for b in self.bands
            ],
            "cuts": self.cuts.to_dict(orient="records"),
        }


def summarize(draws, alpha=0.05):
    """
    Summarizes posterior draws.

    Parameters
    ----------
    draws : PosteriorDraws
    alpha : float

    Returns
    -------
    PosteriorSummary
    """

    bands = [
        CredibleBand.from_draws(draws.beta_draws[:, p, :], alpha)
        for p in range(draws.P)
    ]

    lower, upper = pointwise_band(draws.cut_draws, alpha)
    cuts = pd.DataFrame(
        {
            "cut": [f"c{i + 1}" for i in range(draws.cut_draws.shape[1])],
            "mean": draws.cut_draws.mean(axis=0),
            "lower": lower,
            "upper": upper,
        }
    )

    return PosteriorSummary(bands, cuts, draws.time_grid, float(alpha))


def holdout_accuracy(draws, covariates, outcomes):
    """
    Share of holdout outcomes predicted correctly by each retained draw,
    using the fixed-effect predictor X beta(t) and that draw's cut points.

    Parameters
    ----------
    draws : PosteriorDraws
    covariates : np.ndarray
        N_test x P.
    outcomes : np.ndarray
        N_test x T.

    Returns
    -------
    np.ndarray
        Length-M accuracies.
    """

    X = np.asarray(covariates, dtype=float)
    acc = np.empty(draws.M)
    for m in range(draws.M):
        eta = X @ draws.beta_draws[m]
        pred = predict_category(eta, CutPoints(draws.cut_draws[m]))
        acc[m] = np.mean(pred == outcomes)

    return acc


@dataclass(frozen=True, eq=False)
class CrossValidationResult:
    """
    Parameters
    ----------
    folds : pd.DataFrame
        One row per fold: fold, n_train, n_test, accuracy, seed.
    assignment : np.ndarray
        Fold of every subject.
    overall : float
        Median of the fold accuracies.
    """

    folds: pd.DataFrame
    assignment: np.ndarray
    overall: float


def _run_fold(train, test, config, library_path):
    """Fits one training split and scores its holdout subjects."""

    from OPFRM.manager import FitManager

    manager = FitManager(config, data=train, library_path=library_path)
    manager.run()
    acc = holdout_accuracy(manager.draws, test.covariates, test.outcomes)
    return float(np.median(acc))


def cross_validate(
    data, config, n_folds, rng, jobs=1, library_path=None, verbose=False
):
    """
    k-fold cross-validated predictive accuracy over subjects.

    Subjects are shuffled with `rng` and split into `n_folds` folds. Each
    fold's value is the median over posterior draws of the share of its
    holdout outcomes predicted correctly; the overall value is the median
    over folds.

    Parameters
    ----------
    data : OrdinalFunctionalDataset
    config : dict
        Run configuration with a `model` section.
    n_folds : int
        At least 2 and at most N.
    rng : np.random.Generator
    jobs : int (optional)
        Worker processes. Default: 1.
    library_path : str (optional)
        The absolute path to the library. Default: the active library.
    verbose : bool (optional)

    Returns
    -------
    CrossValidationResult

    Raises
    ------
    EmptyFoldError
        More folds than subjects.
    """

    if n_folds < 2:
        raise ValueError(f"n_folds must be at least 2, got {n_folds}.")

    if n_folds > data.N:
        raise EmptyFoldError(n_folds, data.N)

    from OPFRM.manager import FitManager

    if library_path is not None:
        initialize_library(library_path)

    library_path = active_library()
    model = FitManager.resolve_model(config.get("model", None))

    perm = rng.permutation(data.N)
    folds = np.array_split(perm, n_folds)
    seeds = rng.integers(0, 2**63, size=n_folds)

    assignment = np.empty(data.N, dtype=int)
    tasks = []
    for k, test_idx in enumerate(folds):
        assignment[test_idx] = k
        train_idx = np.sort(np.setdiff1d(perm, test_idx))
        fold_config = {**config, "model": {**model}}
        fold_config["model"]["seed"] = int(seeds[k])
        tasks.append(
            (
                data.subset(train_idx),
                data.subset(np.sort(test_idx)),
                fold_config,
                library_path,
            )
        )

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_fold, *t) for t in tasks]
            accuracy = [f.result() for f in futures]

    else:
        accuracy = []
        for k, t in enumerate(tasks):
            accuracy.append(_run_fold(*t))
            if verbose:
                print(f"fold {k + 1}/{n_folds}: accuracy {accuracy[-1]:.4f}")

    table = pd.DataFrame(
        {
            "fold": np.arange(n_folds),
            "n_train": [t[0].N for t in tasks],
            "n_test": [t[1].N for t in tasks],
            "accuracy": accuracy,
            "seed": seeds.astype(np.uint64),
        }
    )

    return CrossValidationResult(table, assignment, float(np.median(accuracy)))
