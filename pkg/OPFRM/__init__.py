""" Initializes OPFRM and provides the top-level import objects."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"
__status__ = "Development"


from OPFRM.manager import FitManager  # isort:skip
from OPFRM.config import load_config, save_config
from OPFRM.parametric import StudyManager

__version__ = "0.1.0"
