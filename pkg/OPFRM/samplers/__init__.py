"""
The samplers package contains `BaseSampler` and the basis-specific Gibbs
samplers.
"""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


from .base import BaseSampler
from .spline import SplineSampler, fit_spline
from .wavelet import WaveletSampler, fit_wavelet
