"""Exception types shared across the package.

The CLI maps these onto exit codes: domain and format errors exit 1,
exceeded search caps exit 2.
"""


class DomainError(ValueError):
    """Invalid mathematical input: axiom violation or broken precondition."""


class FormatError(DomainError):
    """Malformed input text or file: bad token, bad rational, bad shape."""


class CapExceeded(RuntimeError):
    """A search was refused because its size exceeds the configured cap."""
