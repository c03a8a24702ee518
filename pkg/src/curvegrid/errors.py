"""Exception types shared across the package."""


class FormatError(ValueError):
    """Malformed or truncated serialized data (image files, grid files, arch specs)."""


class UnsupportedFormatError(FormatError):
    """Well-formed data in a variant this library does not handle."""


class ChannelMismatchError(ValueError):
    """Operation applied to an image with the wrong channel count."""


class ShapeError(ValueError):
    """Mismatched spatial dimensions between two inputs."""


class ConfigError(ValueError):
    """Inconsistent or invalid configuration (value domains, parameter ranges)."""
