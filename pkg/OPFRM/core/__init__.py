"""Core data model, configuration and random streams shared by all samplers."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


from .library import loader
from .random import rng_stream, derive_seed
