"""Exception taxonomy shared across the package.

The CLI maps these onto distinct exit codes, so engines raise structured
errors rather than bare ValueErrors for anything a user can hit.
"""


class EnumkitError(Exception):
    """Base class for all package errors."""


class ConfigError(EnumkitError):
    """Bad run configuration (unknown problem, invalid ring spec, ...)."""


class InvalidStateError(EnumkitError):
    """A state key is malformed or violates a problem's preconditions."""


class RingOverflowError(EnumkitError):
    """Checked integer arithmetic left the 64-bit range.

    Carries a hint because the standard remedy is switching to modular
    rings and reconstructing with the CRT.
    """

    def __init__(self, detail: str):
        super().__init__(f"{detail}; use modular rings (mod:<m1,m2,...>) and CRT reconstruction")


class ProductTermError(EnumkitError):
    """A product term reached an engine that only supports cumulative sums."""


class ResourceLimitError(EnumkitError):
    """A state, stack, or frontier limit was exceeded."""


class AuditTruncatedError(EnumkitError):
    """An audit could not sweep the full reachable set within its limit."""
