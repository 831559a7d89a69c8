"""Provides `WaveletTransform`, a multilevel DWT with a dense matrix form."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import warnings
from functools import cached_property
from dataclasses import dataclass

import numpy as np
import pywt
from scipy import linalg

from OPFRM.core.exceptions import WaveletSizeError, InvalidModelConfig

MAX_DENSE_T = 4096

PYWT_PREFIX = {"symmlet": "sym", "daubechies": "db", "coiflet": "coif"}
PYWT_MODE = {
    "symmetric_halfpoint": "symmetric",
    "periodic": "periodization",
    "zero": "zero",
}


def wavelet_name(family, vanishing_moments):
    """
    Returns the PyWavelets name of the filter with `vanishing_moments`
    vanishing moments in `family`.

    Parameters
    ----------
    family : str
        'symmlet', 'daubechies' or 'coiflet'.
    vanishing_moments : int

    Raises
    ------
    InvalidModelConfig
        The filter does not exist.
    """

    try:
        prefix = PYWT_PREFIX[family]

    except KeyError:
        raise InvalidModelConfig("family", family, "unknown wavelet family")

    order = vanishing_moments
    if family == "coiflet":
        # coifN has 2N vanishing moments
        if vanishing_moments % 2:
            raise InvalidModelConfig(
                "vanishing_moments", vanishing_moments, "must be even"
            )

        order = vanishing_moments // 2

    name = f"{prefix}{order}"
    if name not in pywt.wavelist(kind="discrete"):
        raise InvalidModelConfig(
            "vanishing_moments",
            vanishing_moments,
            f"no {family} filter with that many vanishing moments",
        )

    return name


def check_vanishing_moments(name, vanishing_moments, rtol=1e-8):
    """
    Checks that the first `vanishing_moments` polynomial moments of the
    high-pass decomposition filter of `name` vanish.

    Returns
    -------
    np.ndarray
        The normalized moments, all below `rtol`.

    Raises
    ------
    InvalidModelConfig
    """

    h = np.asarray(pywt.Wavelet(name).dec_hi, dtype=float)
    n = np.arange(h.size) - (h.size - 1) / 2.0

    moments = np.empty(vanishing_moments)
    for m in range(vanishing_moments):
        terms = n**m * h
        moments[m] = abs(terms.sum()) / np.abs(terms).sum()

    if np.any(moments > rtol):
        raise InvalidModelConfig(
            "vanishing_moments",
            vanishing_moments,
            f"filter '{name}' has non-vanishing moment "
            f"{int(np.argmax(moments > rtol))}",
        )

    return moments


@dataclass(frozen=True)
class WaveletTransform:
    """
    Multilevel discrete wavelet transform of length-T signals.

    Coefficients are ordered coarse to fine: the approximation block (scale
    group 0) followed by the detail blocks of levels J, J-1, ..., 1 (scale
    groups 1..J).

    Parameters
    ----------
    T : int
        Signal length.
    levels : int
        Decomposition depth J, with 2**J <= T.
    family : str
        'symmlet', 'daubechies' or 'coiflet'.
    vanishing_moments : int
    padding : str
        'symmetric_halfpoint', 'periodic' or 'zero'.
    """

    T: int
    levels: int
    family: str = "symmlet"
    vanishing_moments: int = 8
    padding: str = "symmetric_halfpoint"

    def __post_init__(self):

        if self.T < 1:
            raise WaveletSizeError(self.T, "signal length must be positive")

        if self.levels < 0 or 2**self.levels > self.T:
            raise WaveletSizeError(
                self.T, f"J = {self.levels} needs 0 <= J and 2**J <= T"
            )

        if self.padding not in PYWT_MODE:
            raise InvalidModelConfig("padding", self.padding, "unknown")

        check_vanishing_moments(self.name, self.vanishing_moments)

        if self.levels > self.max_clean_levels:
            warnings.warn(
                f"J = {self.levels} exceeds the {self.max_clean_levels} "
                f"levels free of boundary effects for '{self.name}' at "
                f"T = {self.T}; coarse levels are padding dominated."
            )

    @property
    def name(self):
        """PyWavelets filter name."""
        return wavelet_name(self.family, self.vanishing_moments)

    @property
    def mode(self):
        """PyWavelets signal extension mode."""
        return PYWT_MODE[self.padding]

    @property
    def max_clean_levels(self):
        return pywt.dwt_max_level(self.T, pywt.Wavelet(self.name).dec_len)

    def _wavedec(self, signal):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            return pywt.wavedec(
                signal, self.name, mode=self.mode, level=self.levels, axis=-1
            )

    @cached_property
    def block_sizes(self):
        """Coefficient counts per scale group, coarse to fine."""

        if self.levels == 0:
            return (self.T,)

        return tuple(c.shape[-1] for c in self._wavedec(np.zeros(self.T)))

    @property
    def T_star(self):
        """Total number of coefficients."""
        return int(sum(self.block_sizes))

    @property
    def n_groups(self):
        """Number of scale groups, J + 1."""
        return self.levels + 1

    @cached_property
    def groups(self):
        """Scale group of every coefficient column."""

        return np.repeat(np.arange(self.n_groups), self.block_sizes)

    @cached_property
    def index_map(self):
        """List of (scale group, location) per coefficient column."""

        return [
            (j, k) for j, n in enumerate(self.block_sizes) for k in range(n)
        ]

    def forward(self, signal):
        """
        Transforms `signal` along its last axis.

        Parameters
        ----------
        signal : np.ndarray
            (..., T) array.

        Returns
        -------
        np.ndarray
            (..., T_star) coefficients.
        """

        signal = np.asarray(signal, dtype=float)
        if signal.shape[-1] != self.T:
            raise ValueError(
                f"Signal length {signal.shape[-1]} does not match "
                f"T = {self.T}."
            )

        if self.levels == 0:
            return signal.copy()

        return np.concatenate(self._wavedec(signal), axis=-1)

    def inverse(self, coefficients):
        """
        Reconstructs signals from coefficients produced by `forward`.

        Parameters
        ----------
        coefficients : np.ndarray
            (..., T_star) array.

        Returns
        -------
        np.ndarray
            (..., T) signals.
        """

        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.shape[-1] != self.T_star:
            raise ValueError(
                f"Coefficient length {coefficients.shape[-1]} does not match "
                f"T* = {self.T_star}."
            )

        if self.levels == 0:
            return coefficients.copy()

        splits = np.cumsum(self.block_sizes)[:-1]
        blocks = np.split(coefficients, splits, axis=-1)
        out = pywt.waverec(blocks, self.name, mode=self.mode, axis=-1)

        return out[..., : self.T]

    @cached_property
    def matrix(self):
        """
        Dense T* x T matrix W with `forward(y) == W @ y`.

        Raises
        ------
        WaveletSizeError
            T above the dense-construction limit.
        """

        if self.T > MAX_DENSE_T:
            raise WaveletSizeError(
                self.T, f"dense matrix limited to T <= {MAX_DENSE_T}"
            )

        W = self.forward(np.eye(self.T)).T
        W.setflags(write=False)
        return W

    @cached_property
    def back_transform(self):
        """
        T x T* Moore-Penrose pseudo-inverse of `matrix`, mapping coefficient
        vectors to the data scale.
        """

        B = linalg.pinv(self.matrix)
        B.setflags(write=False)
        return B

    def to_data_scale(self, coefficients):
        """Maps (..., T_star) coefficients to (..., T) curves."""

        return np.asarray(coefficients) @ self.back_transform.T


def dwt_forward(signal, spec):
    """Functional form of `WaveletTransform.forward`."""
    return spec.forward(signal)


def dwt_inverse(coefficients, spec):
    """Functional form of `WaveletTransform.inverse`."""
    return spec.inverse(coefficients)


def dwt_matrix(spec):
    """Functional form of `WaveletTransform.matrix`."""
    return spec.matrix
