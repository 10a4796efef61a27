"""Exception types; the CLI maps each to an exit code."""


class EllFGLError(Exception):
    """Base class for package errors."""


class UsageError(EllFGLError, ValueError):
    """Bad arguments or preconditions (CLI exit code 2)."""


class DomainError(EllFGLError, TypeError):
    """Mixing Z and Q coefficients, or a division that leaves Z."""


class VerificationError(EllFGLError, AssertionError):
    """A checked identity failed (CLI exit code 1)."""


class ResourceGuardError(EllFGLError, RuntimeError):
    """A configured size or step guard was exceeded (CLI exit code 3)."""
