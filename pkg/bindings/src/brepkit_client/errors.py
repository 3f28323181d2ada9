"""Client-side error types, plus the kernel errors a caller can see.

The kernel's own exceptions pass through unchanged so callers get the
full entity context (file path, format path, ``part i face j`` prefixes).
The client adds exactly one failure mode of its own: touching a handle
whose session has been closed.
"""

from brepkit.errors import (BrepError, CallbackError, FormatError,
                            UnreadableFileError)

__all__ = ["BrepError", "CallbackError", "ClientError", "FormatError",
           "SessionClosedError", "UnreadableFileError"]


class ClientError(Exception):
    """Base for errors raised by the client layer itself."""


class SessionClosedError(ClientError):
    """A handle was used after its owning session was closed."""
