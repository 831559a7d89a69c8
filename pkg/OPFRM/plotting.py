"""Figures of credible bands and replicate estimates."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import numpy as np
import matplotlib.pyplot as plt

from OPFRM.config import atomic_write

DPI = 200


def _finish(fig, ax, save_path_name, show, return_fig):

    if save_path_name is not None:
        with atomic_write(save_path_name, mode="wb") as f:
            fig.savefig(f, format="png", bbox_inches="tight", dpi=DPI)

    if show:
        plt.show()

    if return_fig:
        return fig, ax

    plt.close(fig)


def plot_band(
    band,
    time_grid,
    save_path_name=None,
    title=None,
    show=False,
    return_fig=False,
):
    """
    Plots the posterior mean curve with its joint and point-wise bands.

    Parameters
    ----------
    band : CredibleBand
    time_grid : np.ndarray
    save_path_name : str, default: None
        Path of the PNG to write.
    title : str, default: None
    show : bool, default: False
    return_fig : bool, default: False
        If true, the figure (`fig`) and axes (`ax`) objects are returned.

    Returns
    -------
    fig, ax
        Only when `return_fig` is true.
    """

    t = np.asarray(time_grid, dtype=float)
    fig, ax = plt.subplots(figsize=(8, 4.5))

    ax.fill_between(
        t,
        band.joint_lower,
        band.joint_upper,
        color="tab:blue",
        alpha=0.2,
        lw=0,
        label="Joint",
    )
    ax.fill_between(
        t,
        band.pw_lower,
        band.pw_upper,
        color="tab:blue",
        alpha=0.4,
        lw=0,
        label="Point-wise",
    )
    ax.plot(t, band.center, color="k", lw=1.5, label="Posterior mean")
    ax.axhline(0.0, color="gray", lw=0.8, ls=":")

    ax.set_xlabel("t")
    ax.set_ylabel(r"$\beta(t)$")
    if title:
        ax.set_title(title)

    ax.legend(loc="best", frameon=False)
    return _finish(fig, ax, save_path_name, show, return_fig)


def plot_replicates(
    estimates,
    truth,
    time_grid,
    save_path_name=None,
    title=None,
    show=False,
    return_fig=False,
):
    """
    Overlays replicate posterior mean curves (light gray), their average
    (black) and the true curve (dashed).

    Parameters
    ----------
    estimates : np.ndarray
        R x T posterior mean curves.
    truth : np.ndarray
    time_grid : np.ndarray
    save_path_name : str, default: None
    title : str, default: None
    show : bool, default: False
    return_fig : bool, default: False
    """

    t = np.asarray(time_grid, dtype=float)
    estimates = np.atleast_2d(estimates)
    fig, ax = plt.subplots(figsize=(8, 4.5))

    for est in estimates:
        ax.plot(t, est, color="lightgray", lw=0.6)

    ax.plot(t, estimates.mean(axis=0), color="k", lw=1.5, label="Average")
    ax.plot(t, truth, color="tab:red", lw=1.5, ls="--", label="Truth")

    ax.set_xlabel("t")
    ax.set_ylabel(r"$\hat\beta(t)$")
    if title:
        ax.set_title(title)

    ax.legend(loc="best", frameon=False)
    return _finish(fig, ax, save_path_name, show, return_fig)
