"""Exception types raised across the package.

Every error inherits from :class:`IVBoundsError` so callers can catch the
whole family with one clause.  Data-quality errors carry the first offending
row where that is meaningful.
"""


class IVBoundsError(Exception):
    """Base class for all errors raised by ivbounds."""


# --- dataset ingestion ----------------------------------------------------

class MissingColumnError(IVBoundsError):
    """A required column is absent from the input file."""


class NonBinaryTreatmentError(IVBoundsError):
    """Treatment value outside {0, 1}; message names the first offending row."""


class NonBinaryInstrumentError(IVBoundsError):
    """Instrument value outside {0, 1}; message names the first offending row."""


class NonFiniteOutcomeError(IVBoundsError):
    """Outcome is NaN or infinite; message names the first offending row."""


# --- cell-level preconditions ---------------------------------------------

class EmptyInstrumentArmError(IVBoundsError):
    """One instrument arm has no observations."""


class EmptyCellError(IVBoundsError):
    """A required (d, z) cell has no observations."""


class EmptyTrimmedCellError(IVBoundsError):
    """A trimmed sub-cell has too few observations for a variance."""


class QuantileOutOfRangeError(IVBoundsError):
    """Requested quantile level is outside (0, 1]."""


# --- step functions and binning -------------------------------------------

class NotAFullCdfError(IVBoundsError):
    """Operation requires a cdf with total mass one."""


class BadBinEdgesError(IVBoundsError):
    """Bin edges are not strictly increasing or do not cover the data."""


# --- bound computation ----------------------------------------------------

class DegenerateFirstStageError(IVBoundsError):
    """First stage is zero, so the requested check degenerates."""


class NonPositiveFirstStageError(IVBoundsError):
    """Operation requires a strictly positive first stage."""


class DefierShareNotInteriorError(IVBoundsError):
    """Supplied defier share is not interior to its identified set."""


class EmptyIdentifiedSetError(IVBoundsError):
    """Requested object does not exist because the identified set is empty."""


class NotBinaryOutcomeError(IVBoundsError):
    """Closed-form binary bounds require outcome support inside {0, 1}."""


class InapplicableError(IVBoundsError):
    """The mixture construction does not apply to this sample."""


# --- inference -------------------------------------------------------------

class BadLevelError(IVBoundsError):
    """Confidence level must lie strictly between 0 and 1."""


class NegativeSeError(IVBoundsError):
    """Standard errors must be nonnegative."""


# --- simulation ------------------------------------------------------------

class NonPsdCovarianceError(IVBoundsError):
    """Implied latent covariance matrix is not positive semi-definite."""


class NotAnalyticError(IVBoundsError):
    """Closed-form type shares exist only for the independent-latent design."""


class EmptyTypeError(IVBoundsError):
    """No simulated draws of the requested compliance type."""


class MissingDataError(IVBoundsError):
    """A replication target needs a user-supplied dataset."""


class MuOutOfBoundsWarning(UserWarning):
    """A supplied conditional mean lies outside its identified interval."""
