"""Default inputs used throughout OPFRM."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"

import os

import yaml

from OPFRM.core.library import loader

DIR = os.path.split(__file__)[0]

with open(os.path.join(DIR, "hyperparameters.yaml"), "r") as f:
    hyperparameters = yaml.load(f, Loader=loader)
