"""Exception hierarchy shared across the package."""


class KbSearchError(Exception):
    """Base class for all package errors."""


class MalformedId(KbSearchError):
    pass


class ParseError(KbSearchError):
    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class DuplicateId(KbSearchError):
    def __init__(self, item_id, line_no=None):
        msg = f"duplicate id {item_id!r}"
        if line_no is not None:
            msg += f" at line {line_no}"
        super().__init__(msg)
        self.item_id = item_id
        self.line_no = line_no


class ZeroVector(KbSearchError):
    pass


class DimensionMismatch(KbSearchError):
    pass


class ProviderUnreachable(KbSearchError):
    pass


class ProviderError(KbSearchError):
    pass


class EmbedFailure(KbSearchError):
    def __init__(self, item_id, cause):
        super().__init__(f"embedding failed for {item_id}: {cause}")
        self.item_id = item_id
        self.cause = cause


class IoFailure(KbSearchError):
    pass


class BadMagic(KbSearchError):
    pass


class UnsupportedVersion(KbSearchError):
    pass


class Truncated(KbSearchError):
    pass


class CorruptIds(KbSearchError):
    pass


class NotFound(KbSearchError):
    pass


class DegenerateInput(KbSearchError):
    pass


class TooFewPoints(KbSearchError):
    pass


class LengthMismatch(KbSearchError):
    pass
