"""brepkit_client: session-scoped access to the brepkit kernel.

Exposes the four data-pipeline entry points (``read_parts``,
``read_meshes``, ``sample_parts``, ``get_mesh``) plus the stock labeling
callbacks. All results are bit-identical to the kernel's for the same
inputs and seed; the client only adds handle lifetime management.
"""

from .errors import (BrepError, CallbackError, ClientError, FormatError,
                     SessionClosedError, UnreadableFileError)
from .session import (BoundGeometry, BoundMeshSet, BoundPart, BoundTopoRef,
                      Session, builtin_callbacks, get_mesh, read_meshes,
                      read_parts, sample_parts)

__version__ = "0.1.0"

__all__ = [
    "BrepError", "CallbackError", "ClientError", "FormatError",
    "SessionClosedError", "UnreadableFileError",
    "BoundGeometry", "BoundMeshSet", "BoundPart", "BoundTopoRef",
    "Session", "builtin_callbacks", "get_mesh", "read_meshes",
    "read_parts", "sample_parts",
    "__version__",
]
