"""Exception hierarchy shared by all modules."""


class TwistcheckError(Exception):
    """Base class for every error raised by this package."""


class UnsupportedGenus(TwistcheckError):
    pass


class UnknownName(TwistcheckError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class OneSidedCurve(TwistcheckError):
    pass


class SchemaMismatch(TwistcheckError):
    pass


class CatalogParseError(TwistcheckError):
    def __init__(self, message, line=None, col=None):
        super().__init__(message)
        self.line = line
        self.col = col

    def __str__(self):
        base = super().__str__()
        if self.line is not None:
            return f"{base} (line {self.line}, column {self.col})"
        return base


class InvariantViolation(TwistcheckError):
    def __init__(self, entry, message):
        super().__init__(f"{entry}: {message}")
        self.entry = entry


class WordSyntaxError(TwistcheckError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class MacroCycle(TwistcheckError):
    pass


class InapplicableGenus(TwistcheckError):
    pass


class DimensionMismatch(TwistcheckError):
    pass


class CapExceeded(TwistcheckError):
    pass


class ClaimFileError(TwistcheckError):
    pass
