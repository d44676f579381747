"""Exception types shared across the package."""


class DtGenError(Exception):
    """Base class for all errors raised by this package."""


class OsmParseError(DtGenError):
    """Raised when OSM XML input is not well formed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class FetchError(DtGenError):
    """Base class for map download failures."""


class TransportError(FetchError):
    """Network-level failure: connection refused, DNS, timeout."""


class RemoteError(FetchError):
    """HTTP error status returned by the map server."""

    def __init__(self, status: int, body_excerpt: str):
        super().__init__(f"server returned HTTP {status}: {body_excerpt!r}")
        self.status = status
        self.body_excerpt = body_excerpt


class ResponseFormatError(FetchError):
    """Server response body does not look like OSM XML."""


class ConfigError(DtGenError):
    """Base class for configuration file problems."""


class ConfigParseError(ConfigError):
    """Configuration file is not valid JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class ConfigValidationError(ConfigError):
    """Configuration violates a documented constraint."""


class EmitError(DtGenError):
    """World assembly failed, e.g. duplicate model names."""
