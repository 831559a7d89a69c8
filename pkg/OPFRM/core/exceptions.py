"""Custom exceptions used throughout OPFRM."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


class MissingInputs(Exception):
    """Exception for missing input parameters."""

    def __init__(self, k):
        """
        Creates an instance of MissingInputs.

        Parameters
        ----------
        k : list
            Missing keys.
        """

        self.keys = k
        self.message = f"Input(s) '{self.keys}' missing in config."

    def __str__(self):
        return self.message


class InvalidModelConfig(Exception):
    """Exception for a model configuration value outside its valid range."""

    def __init__(self, key, value, reason):
        """
        Creates an instance of InvalidModelConfig.

        Parameters
        ----------
        key : str
            Offending configuration key.
        value : varies
            Offending value.
        reason : str
            Requirement that `value` failed.
        """

        self.key = key
        self.value = value
        self.reason = reason
        self.message = f"Invalid '{key}' = {value!r}: {reason}."

    def __str__(self):
        return self.message


class DatasetFormatError(Exception):
    """Error for malformed outcome, covariate or grid files."""

    def __init__(self, path, reason):
        """
        Creates an instance of DatasetFormatError.

        Parameters
        ----------
        path : str
            File that failed to parse or validate.
        reason : str
            Description of the problem.
        """

        self.path = path
        self.reason = reason
        self.message = f"Bad dataset file '{path}': {reason}"

    def __str__(self):
        return self.message


class LibraryItemNotFoundError(Exception):
    """Error for missing library data."""

    def __init__(self, path, fname):
        """
        Creates an instance of LibraryItemNotFoundError.

        Parameters
        ----------
        path : str
            Library subdirectory that was searched.
        fname : str
            Name of the missing file.
        """

        self.message = f"{fname} not found in {path}."

    def __str__(self):
        return self.message


class SamplerNotFound(Exception):
    """Exception for an unregistered basis / sampler name."""

    def __init__(self, basis, available):
        """
        Creates an instance of SamplerNotFound.

        Parameters
        ----------
        basis : str
            Requested basis name.
        available : list
            Registered basis names.
        """

        self.basis = basis
        self.message = (
            f"No sampler registered for basis '{basis}'. "
            f"Available: {sorted(available)}."
        )

    def __str__(self):
        return self.message


class WaveletSizeError(Exception):
    """Error for a wavelet transform that cannot be built as requested."""

    def __init__(self, T, reason):
        """
        Creates an instance of WaveletSizeError.

        Parameters
        ----------
        T : int
            Signal length.
        reason : str
        """

        self.T = T
        self.message = f"Wavelet transform for T={T} rejected: {reason}"

    def __str__(self):
        return self.message


class SplineBasisError(Exception):
    """Error for an invalid spline basis request."""

    def __init__(self, K, reason):
        """
        Creates an instance of SplineBasisError.

        Parameters
        ----------
        K : int
            Requested number of interior knots.
        reason : str
        """

        self.K = K
        self.message = f"Cannot build cubic spline basis with K={K}: {reason}"

    def __str__(self):
        return self.message


class RankDeficientError(Exception):
    """Error for a covariate matrix without full column rank."""

    def __init__(self, rank, ncol):
        """
        Creates an instance of RankDeficientError.

        Parameters
        ----------
        rank : int
            Numerical rank of the matrix.
        ncol : int
            Number of columns.
        """

        self.rank = rank
        self.ncol = ncol
        self.message = (
            f"Covariate matrix has rank {rank} but {ncol} columns; "
            "X must have full column rank."
        )

    def __str__(self):
        return self.message


class PrecisionNotPositiveDefinite(Exception):
    """Error for a Gaussian conditional whose precision cannot be factored."""

    def __init__(self, block):
        """
        Creates an instance of PrecisionNotPositiveDefinite.

        Parameters
        ----------
        block : str
            Name of the parameter block being sampled.
        """

        self.block = block
        self.message = (
            f"Posterior precision for '{block}' is not positive definite; "
            "check the smoothing parameters and penalty."
        )

    def __str__(self):
        return self.message


class InvalidTruncation(Exception):
    """Error for an empty truncation interval."""

    def __init__(self, lower, upper):
        """
        Creates an instance of InvalidTruncation.

        Parameters
        ----------
        lower : float | np.ndarray
        upper : float | np.ndarray
        """

        self.lower = lower
        self.upper = upper
        self.message = (
            "Truncation requires lower < upper; "
            f"got lower={lower}, upper={upper}."
        )

    def __str__(self):
        return self.message


class CutPointOrderError(Exception):
    """Error raised when a cut-point update finds an empty support."""

    def __init__(self, index, lower, upper):
        """
        Creates an instance of CutPointOrderError.

        Parameters
        ----------
        index : int
            1-based index of the cut point being updated.
        lower : float
            Lower bound of the uniform conditional.
        upper : float
            Upper bound of the uniform conditional.
        """

        self.index = index
        self.lower = lower
        self.upper = upper
        self.message = (
            f"Cut point c_{index} has empty support ({lower}, {upper}); "
            "the latent state violates the category ordering."
        )

    def __str__(self):
        return self.message


class InsufficientDraws(Exception):
    """Error for summaries requested from too few posterior draws."""

    def __init__(self, n, required):
        """
        Creates an instance of InsufficientDraws.

        Parameters
        ----------
        n : int
            Number of draws provided.
        required : int
            Minimum number of draws.
        """

        self.n = n
        self.required = required
        self.message = f"{n} draws provided, at least {required} required."

    def __str__(self):
        return self.message


class DegenerateDraws(Exception):
    """Error for draws with zero posterior spread at every time point."""

    def __init__(self):
        self.message = (
            "All time points have zero posterior standard deviation; "
            "the max statistic is undefined."
        )

    def __str__(self):
        return self.message


class EmptyFoldError(Exception):
    """Error for a cross-validation fold without subjects."""

    def __init__(self, n_folds, n_subjects):
        """
        Creates an instance of EmptyFoldError.

        Parameters
        ----------
        n_folds : int
        n_subjects : int
        """

        self.n_folds = n_folds
        self.n_subjects = n_subjects
        self.message = (
            f"Cannot split {n_subjects} subjects into {n_folds} non-empty "
            "folds."
        )

    def __str__(self):
        return self.message
