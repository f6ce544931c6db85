"""Shared error type with machine-readable codes.

Every domain failure in the kernel raises :class:`KleinError` carrying one of
the ``E_*`` codes below; the CLI maps them straight into error responses.
"""

E_CMD = "E_CMD"
E_SCHEMA = "E_SCHEMA"
E_IO = "E_IO"
E_DOMAIN = "E_DOMAIN"
E_SINGULAR = "E_SINGULAR"
E_NOT_VERSOR = "E_NOT_VERSOR"
E_NULL_VERSOR = "E_NULL_VERSOR"
E_NOT_PIN_REPRESENTABLE = "E_NOT_PIN_REPRESENTABLE"
E_NO_INTERSECTION = "E_NO_INTERSECTION"
E_EMPTY_CONIC = "E_EMPTY_CONIC"


class KleinError(Exception):
    """Exception with a stable error code and a human-readable message."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message

    def __repr__(self):
        return f"KleinError({self.code}: {self.message})"
