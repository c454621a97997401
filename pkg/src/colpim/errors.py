"""Exception types shared across the package."""


class ColpimError(Exception):
    """Base class for all package-specific errors."""


class InvalidOperationError(ColpimError, ValueError):
    """A column operation is malformed or out of range for its grid."""


class EncodingError(ColpimError, ValueError):
    """A value cannot be represented in the requested number format."""


class WorkloadTooLargeError(ColpimError, ValueError):
    """A workload does not fit in the memory rows of the architecture."""


class ConfigError(ColpimError, ValueError):
    """A configuration file or scenario reference does not resolve."""


class ReferenceDataError(ColpimError, ValueError):
    """The shipped reference dataset fails its integrity check."""
