"""Provides `ModelConfig`, the validated `model` section of a run config."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


from dataclasses import fields, asdict, replace, dataclass

from OPFRM.core.random import MAX_SEED
from OPFRM.core.exceptions import InvalidModelConfig

BASES = ("bspline", "ospline", "symmlet")
SPLINE_BASES = ("bspline", "ospline")
FAMILIES = ("symmlet", "daubechies", "coiflet")
PADDINGS = ("symmetric_halfpoint", "periodic", "zero")


@dataclass(frozen=True)
class ModelConfig:
    """
    Model settings for one fit. Defaults: 1000 samples with 500 burn-in,
    two fPCs, eta = 0.01, eight vanishing moments and symmetric half-point
    padding.

    Parameters
    ----------
    basis : str
        'bspline', 'ospline' or 'symmlet'.
    basis_size : int
        K interior knots for splines, J decomposition levels for wavelets.
    n_fpc : int
        K_p, functional principal components (spline samplers only).
    n_samples : int
        Total MCMC iterations.
    n_burn : int
        Leading iterations discarded.
    seed : int
        64-bit unsigned seed.
    eta : float
        Weight of the ridge part of the B-spline composite penalty.
    vanishing_moments : int
        Vanishing moments of the wavelet filter.
    family : str
        'symmlet', 'daubechies' or 'coiflet'. The 'symmlet' basis name is
        kept for any wavelet family.
    padding : str
        'symmetric_halfpoint', 'periodic' or 'zero'.
    """

    basis: str
    basis_size: int
    n_fpc: int = 2
    n_samples: int = 1000
    n_burn: int = 500
    seed: int = 0
    eta: float = 0.01
    vanishing_moments: int = 8
    family: str = "symmlet"
    padding: str = "symmetric_halfpoint"

    def __post_init__(self):

        for k in (
            "basis_size",
            "n_fpc",
            "n_samples",
            "n_burn",
            "seed",
            "vanishing_moments",
        ):
            v = getattr(self, k)
            if isinstance(v, bool) or int(v) != v:
                raise InvalidModelConfig(k, v, "must be an integer")

            object.__setattr__(self, k, int(v))

        object.__setattr__(self, "eta", float(self.eta))

        if self.basis not in BASES:
            raise InvalidModelConfig("basis", self.basis, f"not in {BASES}")

        if self.family not in FAMILIES:
            raise InvalidModelConfig(
                "family", self.family, f"not in {FAMILIES}"
            )

        if self.padding not in PADDINGS:
            raise InvalidModelConfig(
                "padding", self.padding, f"not in {PADDINGS}"
            )

        if self.basis_size < 1:
            raise InvalidModelConfig(
                "basis_size", self.basis_size, "must be at least 1"
            )

        if self.basis in SPLINE_BASES and self.basis_size < 2:
            raise InvalidModelConfig(
                "basis_size",
                self.basis_size,
                "cubic splines need at least 2 interior knots",
            )

        if self.n_fpc < 1:
            raise InvalidModelConfig("n_fpc", self.n_fpc, "must be at least 1")

        if self.n_samples < 1:
            raise InvalidModelConfig(
                "n_samples", self.n_samples, "must be at least 1"
            )

        if not 0 <= self.n_burn < self.n_samples:
            raise InvalidModelConfig(
                "n_burn", self.n_burn, "must satisfy 0 <= n_burn < n_samples"
            )

        if not 0 <= self.seed <= MAX_SEED:
            raise InvalidModelConfig(
                "seed", self.seed, "must be a 64-bit unsigned integer"
            )

        if not 0.0 < self.eta < 1.0:
            raise InvalidModelConfig("eta", self.eta, "must lie in (0, 1)")

        if self.vanishing_moments < 1:
            raise InvalidModelConfig(
                "vanishing_moments", self.vanishing_moments, "must be >= 1"
            )

        if self.family == "coiflet" and self.vanishing_moments % 2:
            raise InvalidModelConfig(
                "vanishing_moments",
                self.vanishing_moments,
                "coiflets have an even number of vanishing moments",
            )

    @property
    def n_retained(self):
        """Number of draws kept after burn-in."""
        return self.n_samples - self.n_burn

    @property
    def is_spline(self):
        return self.basis in SPLINE_BASES

    @classmethod
    def from_dict(cls, data):
        """
        Creates a `ModelConfig` from a `model` config section.

        Parameters
        ----------
        data : dict

        Raises
        ------
        InvalidModelConfig
            Unknown keys or invalid values.
        """

        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidModelConfig(
                unknown[0], data[unknown[0]], "unknown key"
            )

        for k in ("basis", "basis_size"):
            if k not in data:
                raise InvalidModelConfig(k, None, "required")

        return cls(**dict(data))

    def to_dict(self):
        return asdict(self)

    def replace(self, **kwargs):
        """Returns a copy with `kwargs` replaced."""
        return replace(self, **kwargs)
