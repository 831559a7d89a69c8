__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import os
import tempfile
from contextlib import contextmanager

import yaml
from yaml import Dumper

from OPFRM.core.library import loader


def load_config(filepath):
    """
    Load an OPFRM config at `filepath`.

    Parameters
    ----------
    filepath : str
        Path to yaml config file.
    """

    with open(filepath, "r") as f:
        data = yaml.load(f, Loader=loader)

    return data


def save_config(config, filepath, overwrite=False):
    """
    Save an OPFRM `config` to `filepath`.

    Parameters
    ----------
    config : dict
        OPFRM configuration.
    filepath : str
        Location to save config.
    overwrite : bool (optional)
        Overwrite file if it already exists. Default: False.
    """

    if overwrite is False:
        if os.path.exists(filepath):
            raise FileExistsError(f"File already exists at '{filepath}'.")

    with atomic_write(filepath) as f:
        yaml.dump(config, f, Dumper=Dumper, default_flow_style=False)


@contextmanager
def atomic_write(filepath, mode="w"):
    """
    Opens a temporary file next to `filepath` and moves it into place only
    when the block exits cleanly. Missing directories are created.

    Parameters
    ----------
    filepath : str
        Final destination.
    mode : str (optional)
        "w" for text, "wb" for bytes. Default: "w".
    """

    dirs = os.path.split(os.path.abspath(filepath))[0]
    if not os.path.isdir(dirs):
        os.makedirs(dirs)

    fd, tmp = tempfile.mkstemp(
        dir=dirs, prefix=f".{os.path.basename(filepath)}.", suffix=".tmp"
    )
    kwargs = {"newline": ""} if "b" not in mode else {}

    try:
        with os.fdopen(fd, mode, **kwargs) as f:
            yield f

        os.replace(tmp, filepath)

    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)

        raise
