"""Exception types shared across the package."""


class InputError(ValueError):
    """Rejected input: bad ranges, dimension mismatch, malformed files."""


class PointsParseError(InputError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class UnsupportedDimensionError(InputError):
    """The requested bound has no valid form in this dimension (d = 1)."""


class DivergentThresholdError(InputError):
    """The dimension threshold diverges (p >= 1/2)."""
