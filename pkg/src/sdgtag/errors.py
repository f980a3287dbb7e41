"""Exception types raised across the sdgtag package."""


class SdgTagError(Exception):
    """Base class for all sdgtag errors."""


class EmptyTermError(SdgTagError):
    """Raised when normalization leaves nothing of the input string."""


class ParseError(SdgTagError):
    """Raised when an input file cannot be parsed as its declared format."""


class DuplicateSourceError(SdgTagError):
    """Raised when two source datasets in one merge share a source_id."""


class UndefinedRatioError(SdgTagError):
    """Raised when a similarity ratio is requested for two empty strings."""


class CatalogError(SdgTagError):
    """Raised when a Fields-of-Study catalog violates its invariants."""


class EmptyCorpusError(SdgTagError):
    """Raised when an index build is attempted over zero documents."""


class DuplicateFosError(SdgTagError):
    """Raised when an index build sees the same fos_id twice."""


class EmptyDocumentError(SdgTagError):
    """Raised when a FOS document yields no usable tokens."""


class SnapshotError(SdgTagError):
    """Raised when an index snapshot is unreadable or incompatible."""


class ThresholdConfigError(SdgTagError):
    """Raised when a threshold configuration violates its invariants."""


class InvalidDoiError(SdgTagError):
    """Raised when a string cannot be validated as a DOI."""


class ResolveError(SdgTagError):
    """Base class for DOI resolution failures."""

    code = "resolve_error"


class NotFoundError(ResolveError):
    """The metadata source has no record for the DOI."""

    code = "not_found"


class NoAbstractError(ResolveError):
    """The record exists but carries no abstract text."""

    code = "no_abstract"


class TransportError(ResolveError):
    """The metadata source could not be reached or timed out."""

    code = "transport"
