"""Default OPFRM library of named models and simulation scenarios."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"
__status__ = "Development"
