"""Exception hierarchy shared across the package."""


class MtssError(Exception):
    """Base class for every error raised by this package."""


class NotPrimeError(MtssError, ValueError):
    pass


class FieldTooLargeError(MtssError, ValueError):
    pass


class BudgetExceeded(MtssError):
    """A requested exhaustive computation is larger than the allowed budget."""


class NotFound(MtssError, LookupError):
    pass


class UnsupportedParameter(MtssError, ValueError):
    pass


class MalformedKey(MtssError, ValueError):
    pass


class MalformedSignature(MtssError, ValueError):
    pass


class BlockCountMismatch(MtssError, ValueError):
    pass


class TooManyBlocks(MtssError, ValueError):
    pass


class TooManyRedactions(MtssError, ValueError):
    pass


class AlreadyRedacted(MtssError, ValueError):
    pass


class NoConstruction(MtssError, ValueError):
    pass


class ParseError(MtssError, ValueError):
    """Raised for truncated or otherwise undecodable files."""
