"""Exception types shared across the package."""


class InputError(ValueError):
    """An argument violates an operation's preconditions."""


class FormatError(InputError):
    """An input file is malformed; the message carries file context."""


class ClosureError(RuntimeError):
    """A filtration violates the face-closure invariant."""
