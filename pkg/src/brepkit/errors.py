"""Exception types shared across the package."""


class BrepError(Exception):
    """Base class for all brepkit errors."""


class FormatError(BrepError):
    """A file does not follow the on-disk layout (bad version, missing
    group or dataset, malformed shapes). Carries the offending HDF5 path
    when one is known."""

    def __init__(self, message, path=None):
        self.path = path
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


class UnreadableFileError(BrepError):
    """The file cannot be opened or parsed as HDF5 at all."""


class ValidationError(BrepError):
    """A part failed model validation. ``violations`` holds the list."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = ", ".join(str(v) for v in self.violations[:5])
        more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"{len(self.violations)} violation(s): {lines}{more}")


class DomainError(BrepError):
    """Parameter outside the entity's parametric domain."""


class UnsupportedKindError(BrepError):
    """No evaluator for this curve/surface kind (an ``Other`` entity with
    no registered fallback, or nesting past the recursion cap)."""


class SingularJetError(BrepError):
    """The surface jet is degenerate (|Su x Sv| below the singularity
    threshold), so no normal can be computed at this parameter."""


class OpenLoopError(BrepError):
    """A trimming loop's half-edge chain does not close."""


class InconsistentTopologyError(BrepError):
    """Top-down links disagree (e.g. one half-edge claimed by two loops)."""


class UnknownMutationError(BrepError):
    """Requested corruption kind does not exist."""


class CallbackError(BrepError):
    """A user sampling callback raised. Wraps the original exception with
    the topological entity it was processing."""
