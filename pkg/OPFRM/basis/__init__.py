"""Wavelet transforms, spline bases and fPC initialization."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


from .fpc import init_fpc
from .spline import (
    SplineBasis,
    spline_basis,
    bspline_design,
    ospline_design,
)
from .wavelet import (
    WaveletTransform,
    dwt_matrix,
    dwt_forward,
    dwt_inverse,
)
