"""Command-line interface: `opfrm <command> [flags]`."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import os
import sys
import json
import argparse

import numpy as np
import pandas as pd
from scipy import linalg

from OPFRM.config import atomic_write
from OPFRM.manager import FitManager, write_summary
from OPFRM.inference import cross_validate
from OPFRM.simulate import (
    SETTINGS,
    STRUCTURES,
    SimulationScenario,
    generate_dataset,
)
from OPFRM.parametric import REFERENCE_MODELS, StudyManager
from OPFRM.basis import WaveletTransform, spline_basis
from OPFRM.core.data import read_grid, load_dataset, write_dataset
from OPFRM.core.draws import PosteriorDraws
from OPFRM.core.model import BASES, FAMILIES, PADDINGS
from OPFRM.core.random import rng_stream
from OPFRM.core.exceptions import (
    EmptyFoldError,
    MissingInputs,
    SplineBasisError,
    DegenerateDraws,
    SamplerNotFound,
    WaveletSizeError,
    InvalidTruncation,
    CutPointOrderError,
    DatasetFormatError,
    InvalidModelConfig,
    InsufficientDraws,
    RankDeficientError,
    LibraryItemNotFoundError,
    PrecisionNotPositiveDefinite,
)

RUNTIME_ERRORS = (
    EmptyFoldError,
    SplineBasisError,
    DegenerateDraws,
    SamplerNotFound,
    WaveletSizeError,
    InvalidTruncation,
    CutPointOrderError,
    DatasetFormatError,
    InsufficientDraws,
    RankDeficientError,
    LibraryItemNotFoundError,
    PrecisionNotPositiveDefinite,
    linalg.LinAlgError,
    ValueError,
    OSError,
)

# Config keys reported as the flag that sets them.
FLAGS = {
    "basis": "--basis",
    "basis_size": "--k/--levels",
    "n_fpc": "--kp",
    "n_samples": "--samples",
    "n_burn": "--burn",
    "seed": "--seed",
    "eta": "--eta",
    "family": "--family",
    "padding": "--padding",
    "setting": "--setting",
    "cov_structure": "--cov",
    "n_subjects": "--n",
    "n_timepoints": "--t",
    "n_levels": "--n-levels",
    "n_replicates": "--reps",
    "rho": "--rho",
}


class CLIParser(argparse.ArgumentParser):
    """Argument parser that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_model_flags(parser):

    group = parser.add_argument_group("model")
    group.add_argument(
        "--basis",
        choices=BASES,
        default="ospline",
        help="Basis for the coefficient curves. Default: ospline.",
    )
    group.add_argument(
        "--k",
        type=int,
        default=4,
        help="Interior knots for spline bases. Default: 4.",
    )
    group.add_argument(
        "--levels",
        type=int,
        default=6,
        help="Wavelet decomposition levels J. Default: 6.",
    )
    group.add_argument(
        "--kp",
        type=int,
        default=2,
        help="Functional principal components (spline bases). Default: 2.",
    )
    group.add_argument(
        "--eta",
        type=float,
        default=0.01,
        help="Ridge weight of the B-spline penalty. Default: 0.01.",
    )
    group.add_argument(
        "--samples",
        type=int,
        default=1000,
        help="Total Gibbs iterations. Default: 1000.",
    )
    group.add_argument(
        "--burn",
        type=int,
        default=500,
        help="Discarded burn-in iterations. Default: 500.",
    )
    _add_wavelet_flags(group)


def _add_wavelet_flags(group):

    group.add_argument(
        "--family",
        choices=FAMILIES,
        default="symmlet",
        help="Wavelet family. Default: symmlet.",
    )
    group.add_argument(
        "--padding",
        choices=PADDINGS,
        default="symmetric_halfpoint",
        help="Wavelet boundary handling. Default: symmetric_halfpoint.",
    )


def _add_data_flags(parser):

    group = parser.add_argument_group("data")
    group.add_argument(
        "--y",
        required=True,
        help="Outcome CSV, N x T integer levels without header.",
    )
    group.add_argument(
        "--x",
        required=True,
        help="Covariate CSV, N x P without header.",
    )
    group.add_argument(
        "--grid",
        default=None,
        help=(
            "Time grid CSV, one row or one column of T values. "
            "Default: 1..T."
        ),
    )
    group.add_argument(
        "--center",
        action="store_true",
        default=False,
        help="Center continuous covariates before fitting. Default: off.",
    )


def _add_seed(parser, default=0):
    parser.add_argument(
        "--seed",
        type=int,
        default=default,
        help=f"Seed for every random stream. Default: {default}.",
    )


def _add_alpha(parser):
    parser.add_argument(
        "--alpha",
        type=float,
        default=0.05,
        help="Band level, 1 - alpha credibility. Default: 0.05.",
    )


def _add_plot(parser):
    parser.add_argument(
        "--plot",
        action="store_true",
        default=False,
        help="Also write PNG figures. Default: off.",
    )


def _add_jobs(parser):
    parser.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="Worker processes. Default: 1.",
    )


def _add_scenario_flags(parser):

    group = parser.add_argument_group("scenario")
    group.add_argument(
        "--setting",
        choices=SETTINGS,
        default="sigmoidal",
        help="True coefficient curve. Default: sigmoidal.",
    )
    group.add_argument(
        "--cov",
        choices=STRUCTURES,
        default="exponential",
        help="Latent error structure. Default: exponential.",
    )
    group.add_argument(
        "--n", type=int, default=40, help="Subjects. Default: 40."
    )
    group.add_argument(
        "--t", type=int, default=256, help="Time points. Default: 256."
    )
    group.add_argument(
        "--n-levels",
        type=int,
        default=4,
        help="Ordinal levels L. Default: 4.",
    )
    group.add_argument(
        "--rho",
        type=float,
        default=None,
        help="Error correlation. Default: 0.5 exponential, 0.3 compound "
        "symmetric.",
    )
    group.add_argument(
        "--amplitude",
        type=float,
        default=1.0,
        help="Multiplier on the true curve. Default: 1.0.",
    )


def build_parser():
    """Returns the `opfrm` argument parser."""

    parser = CLIParser(
        prog="opfrm",
        description="Bayesian ordinal probit function-on-scalar regression.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("simulate", help="Write a simulated dataset.")
    _add_scenario_flags(p)
    _add_seed(p)
    p.add_argument("--out", required=True, help="Output directory.")

    p = sub.add_parser("fit", help="Fit one model and write its outputs.")
    _add_model_flags(p)
    _add_data_flags(p)
    _add_seed(p)
    _add_alpha(p)
    _add_plot(p)
    p.add_argument("--out", required=True, help="Output directory.")
    p.add_argument("--verbose", action="store_true", default=False)

    p = sub.add_parser(
        "summarize", help="Recompute bands from a fit output directory."
    )
    _add_alpha(p)
    _add_plot(p)
    p.add_argument("--out", required=True, help="Fit output directory.")

    p = sub.add_parser("cv", help="k-fold cross-validated accuracy.")
    _add_model_flags(p)
    _add_data_flags(p)
    _add_seed(p)
    _add_jobs(p)
    p.add_argument(
        "--folds", type=int, default=6, help="Number of folds. Default: 6."
    )
    p.add_argument("--out", required=True, help="Output directory.")

    p = sub.add_parser("study", help="Replicate simulation study.")
    _add_scenario_flags(p)
    _add_seed(p)
    _add_jobs(p)
    _add_alpha(p)
    _add_plot(p)
    p.add_argument(
        "--reps", type=int, default=200, help="Replicates. Default: 200."
    )
    p.add_argument(
        "--models",
        nargs="+",
        default=list(REFERENCE_MODELS),
        help="Library model names. Default: "
        f"{' '.join(REFERENCE_MODELS)}.",
    )
    p.add_argument(
        "--samples",
        type=int,
        default=1000,
        help="Total Gibbs iterations. Default: 1000.",
    )
    p.add_argument(
        "--burn",
        type=int,
        default=500,
        help="Discarded burn-in iterations. Default: 500.",
    )
    p.add_argument("--out", required=True, help="Output directory.")

    p = sub.add_parser("export-basis", help="Write a basis matrix to CSV.")
    p.add_argument(
        "--basis", choices=BASES, default="ospline", help="Default: ospline."
    )
    p.add_argument("--k", type=int, default=4, help="Default: 4.")
    p.add_argument("--levels", type=int, default=6, help="Default: 6.")
    p.add_argument("--eta", type=float, default=0.01, help="Default: 0.01.")
    p.add_argument("--t", type=int, default=256, help="Default: 256.")
    p.add_argument(
        "--grid", default=None, help="Time grid CSV. Default: 1..T."
    )
    _add_wavelet_flags(p)
    p.add_argument("--out", required=True, help="Output directory.")

    return parser


def model_from_args(args):
    """Model section built from parsed flags."""

    model = {
        "basis": args.basis,
        "basis_size": args.levels if args.basis == "symmlet" else args.k,
        "n_samples": args.samples,
        "n_burn": args.burn,
        "seed": args.seed,
        "eta": args.eta,
        "family": args.family,
        "padding": args.padding,
    }
    if args.basis != "symmlet":
        model["n_fpc"] = args.kp

    return model


def scenario_from_args(args, n_replicates=1):

    return SimulationScenario(
        setting=args.setting,
        cov_structure=args.cov,
        n_subjects=args.n,
        n_timepoints=args.t,
        n_levels=args.n_levels,
        rho=args.rho,
        n_replicates=n_replicates,
        seed=args.seed,
        amplitude=args.amplitude,
    )


def _data_from_args(args):

    data = load_dataset(args.y, args.x, args.grid)
    return data.centered() if args.center else data


def _write_json(path, obj):
    with atomic_write(path) as f:
        json.dump(obj, f, indent=2, sort_keys=True)


def cmd_simulate(args):

    scenario = scenario_from_args(args)
    data, truth = generate_dataset(scenario, rng_stream(args.seed, 0))

    out = args.out
    write_dataset(
        data,
        os.path.join(out, "y.csv"),
        os.path.join(out, "x.csv"),
        os.path.join(out, "grid.csv"),
    )
    with atomic_write(os.path.join(out, "truth.csv")) as f:
        pd.DataFrame({"t": data.time_grid, "beta": truth}).to_csv(
            f, index=False, float_format="%.17g"
        )

    _write_json(os.path.join(out, "scenario.json"), scenario.to_dict())


def cmd_fit(args):

    manager = FitManager(
        {"model": model_from_args(args)},
        data=_data_from_args(args),
        verbose=args.verbose,
    )
    manager.run()
    manager.save(args.out, alpha=args.alpha, plot=args.plot)


def cmd_summarize(args):

    draws = PosteriorDraws.load(args.out)
    write_summary(draws, args.out, alpha=args.alpha, plot=args.plot)


def cmd_cv(args):

    data = _data_from_args(args)
    result = cross_validate(
        data,
        {"model": model_from_args(args)},
        args.folds,
        rng_stream(args.seed, 1),
        jobs=args.jobs,
    )

    with atomic_write(os.path.join(args.out, "cv_folds.csv")) as f:
        result.folds.to_csv(f, index=False, float_format="%.17g")

    _write_json(
        os.path.join(args.out, "cv_summary.json"),
        {
            "overall_accuracy": result.overall,
            "n_folds": args.folds,
            "assignment": result.assignment.tolist(),
            "model": model_from_args(args),
        },
    )
    print(f"overall median accuracy: {result.overall:.4f}")


def cmd_study(args):

    manager = StudyManager.from_config(
        {
            "scenario": scenario_from_args(args, args.reps).to_dict(),
            "models": args.models,
            "overrides": {"n_samples": args.samples, "n_burn": args.burn},
            "alpha": args.alpha,
            "jobs": args.jobs,
        }
    )
    manager.run()
    manager.save(args.out, plot=args.plot)
    print(manager.table().to_string(index=False))


def cmd_export_basis(args):

    if args.grid is not None:
        grid = read_grid(args.grid)

    else:
        grid = np.arange(1, args.t + 1, dtype=float)

    if args.basis == "symmlet":
        transform = WaveletTransform(
            grid.size, args.levels, args.family, padding=args.padding
        )
        frames = {
            "basis.csv": pd.DataFrame(transform.matrix),
            "groups.csv": pd.DataFrame({"group": transform.groups}),
        }

    else:
        basis = spline_basis(args.basis, grid, args.k, args.eta)
        frames = {
            "basis.csv": pd.DataFrame(basis.design),
            "penalty.csv": pd.DataFrame(basis.penalty),
            "knots.csv": pd.DataFrame({"knot": basis.knots}),
        }

    for name, df in frames.items():
        with atomic_write(os.path.join(args.out, name)) as f:
            df.to_csv(f, index=False, float_format="%.17g")


COMMANDS = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "summarize": cmd_summarize,
    "cv": cmd_cv,
    "study": cmd_study,
    "export-basis": cmd_export_basis,
}


def main(argv=None):
    """
    Runs the `opfrm` command line.

    Parameters
    ----------
    argv : list (optional)
        Arguments without the program name. Default: `sys.argv[1:]`.

    Returns
    -------
    int
        0 on success, 1 on usage errors, 2 on runtime or model errors.
    """

    parser = build_parser()
    args = parser.parse_args(argv)
    prog = f"opfrm {args.command}"

    try:
        COMMANDS[args.command](args)

    except InvalidModelConfig as e:
        flag = FLAGS.get(e.key, e.key)
        if e.key == "basis_size":
            symmlet = getattr(args, "basis", None) == "symmlet"
            flag = "--levels" if symmlet else "--k"

        print(f"{prog}: error: argument {flag}: {e}", file=sys.stderr)
        return 1

    except MissingInputs as e:
        print(f"{prog}: error: {e}", file=sys.stderr)
        return 1

    except RUNTIME_ERRORS as e:
        print(f"{prog}: {type(e).__name__}: {e}", file=sys.stderr)
        return 2

    return 0


if __name__ == "__main__":
    sys.exit(main())
