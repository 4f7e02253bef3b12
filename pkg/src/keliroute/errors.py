"""Exception hierarchy shared across the package."""


class KelirouteError(Exception):
    """Base class for all keliroute errors."""


class InvalidInputError(KelirouteError, ValueError):
    """A numeric input was non-finite or otherwise unusable."""


class UnknownAttributeError(KelirouteError, KeyError):
    """An attribute id is not present in the scale registry."""


class ParseError(KelirouteError):
    """A file or payload could not be parsed.

    Carries the offending path (and line, when known) so callers can
    report actionable diagnostics.
    """

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f" [{path}" + (f":{line}" if line is not None else "") + "]"
        super().__init__(message + location)


class BundleError(KelirouteError):
    """A scenario bundle is missing mandatory files or is inconsistent."""


class ConfigurationError(KelirouteError):
    """An override or config table references something that does not exist."""


class GraphConstructionError(KelirouteError):
    """The road network could not be built (duplicate ids, empty input, ...)."""


class NoRouteError(KelirouteError):
    """The destination is unreachable from the origin."""


class TransportError(KelirouteError):
    """A live endpoint could not be reached or timed out."""
