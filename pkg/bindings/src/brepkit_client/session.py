"""Session-scoped handles over kernel parts, topology refs, and meshes.

A :class:`Session` owns everything it reads; closing it invalidates all
handles it produced, and any later access raises
:class:`SessionClosedError` instead of touching freed state. Handles are
thin: they hold the kernel object plus the owning session and forward
reads, so values seen through a handle are exactly the kernel's values.

Arrays cross the boundary as contiguous float64 buffers. Reads are
zero-copy views onto kernel storage (which is immutable); sampled
positions are freshly produced arrays and owned by the caller.
"""

from __future__ import annotations

import numpy as np

from brepkit import read_meshes as _kernel_read_meshes
from brepkit import read_parts as _kernel_read_parts
from brepkit import get_mesh as _kernel_get_mesh
from brepkit.sampling import SamplerConfig
from brepkit.sampling import builtin_callbacks as _kernel_builtin_callbacks
from brepkit.sampling import sample_parts as _kernel_sample_parts

from .errors import ClientError, SessionClosedError

_NORMALS_CB = _kernel_builtin_callbacks()["normals"]


class Session:
    """Owner of part and mesh handles; usable as a context manager."""

    def __init__(self):
        self._open = True

    @property
    def is_open(self) -> bool:
        return self._open

    def close(self) -> None:
        self._open = False

    def __enter__(self) -> "Session":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def _check(self) -> None:
        if not self._open:
            raise SessionClosedError(
                "session is closed; its handles are no longer valid")

    # -- reading ----------------------------------------------------------

    def read_parts(self, path) -> list:
        self._check()
        return [BoundPart(self, p) for p in _kernel_read_parts(path)]

    def read_meshes(self, path) -> "BoundMeshSet":
        self._check()
        return BoundMeshSet(self, _kernel_read_meshes(path))

    # -- sampling ---------------------------------------------------------

    def sample_parts(self, parts, num_samples: int, fn, *, seed: int = 0,
                     include_edges: bool = True, edge_fraction: float = 0.1,
                     threads: int = 1):
        """Labeled cloud (positions (N, 3), payload array).

        ``fn(part, topo, params)`` receives bound handles; returning None
        skips that entity's batch. Exceptions raised by ``fn`` abort the
        call and propagate with the offending entity named.
        """
        self._check()
        parts = list(parts)
        kernel_parts = [self._own_part(p) for p in parts]
        by_id = {id(k): b for k, b in zip(kernel_parts, parts)}

        def adapter(part, topo, params):
            return fn(by_id[id(part)], BoundTopoRef(self, topo), params)

        config = SamplerConfig(seed=seed, include_edges=include_edges,
                               edge_fraction=edge_fraction, threads=threads)
        positions, payloads = _kernel_sample_parts(
            kernel_parts, num_samples, adapter, config=config)
        return np.ascontiguousarray(positions), _payload_array(payloads)

    def _own_part(self, part):
        if not isinstance(part, BoundPart):
            raise TypeError(f"expected a bound part handle, got "
                            f"{type(part).__name__}")
        if part._session is not self:
            raise ClientError("part handle belongs to a different session")
        return part._kernel


class _Handle:
    """Base: kernel object + owning session, valid while the session is."""

    __slots__ = ("_session", "_obj")

    def __init__(self, session: Session, obj):
        self._session = session
        self._obj = obj

    @property
    def _kernel(self):
        self._session._check()
        return self._obj


class BoundPart(_Handle):
    @property
    def face_count(self) -> int:
        return len(self._kernel.topology.faces)

    @property
    def edge_count(self) -> int:
        return len(self._kernel.topology.edges)

    @property
    def bbox(self) -> np.ndarray:
        return self._kernel.geometry.bbox

    def surface(self, face_index: int) -> "BoundGeometry":
        part = self._kernel
        face = part.topology.faces[face_index]
        return BoundGeometry(self._session, part.geometry.surfaces[face.surface])


class BoundTopoRef(_Handle):
    @property
    def kind(self) -> str:
        return self._kernel.kind

    @property
    def index(self) -> int:
        return self._kernel.index

    def is_face(self) -> bool:
        return self._kernel.is_face()

    def is_edge(self) -> bool:
        return self._kernel.is_edge()

    @property
    def part(self) -> BoundPart:
        return BoundPart(self._session, self._kernel.part)

    @property
    def surface(self) -> "BoundGeometry":
        return BoundGeometry(self._session, self._kernel.surface)

    @property
    def curve(self) -> "BoundGeometry":
        return BoundGeometry(self._session, self._kernel.curve)

    def normal(self, params) -> np.ndarray | None:
        """Oriented unit normals at the given UV rows; None on edges."""
        ref = self._kernel
        if not ref.is_face():
            return None
        return _NORMALS_CB(ref.part, ref, np.atleast_2d(params))


class BoundGeometry(_Handle):
    """Read-only view of one kernel curve or surface."""

    def __getattr__(self, name):
        if name.startswith("_"):
            raise AttributeError(name)
        return getattr(self._kernel, name)


class BoundFaceMesh(_Handle):
    @property
    def points(self) -> np.ndarray:
        return self._kernel.points

    @property
    def triangles(self) -> np.ndarray:
        return self._kernel.triangles

    @property
    def is_empty(self) -> bool:
        return self._kernel.is_empty


class BoundPartMeshes(_Handle):
    """Per-face meshes of one part; missing meshes stay None."""

    def __len__(self) -> int:
        return len(self._kernel)

    def __getitem__(self, face_index: int):
        mesh = self._kernel[face_index]
        return None if mesh is None else BoundFaceMesh(self._session, mesh)


class BoundMeshSet(_Handle):
    """Meshes of a file, indexed ``meshes[part][face]``."""

    def __len__(self) -> int:
        return len(self._kernel)

    def __getitem__(self, part_index: int) -> BoundPartMeshes:
        return BoundPartMeshes(self._session, self._kernel[part_index])


def _payload_array(payloads) -> np.ndarray:
    if not payloads:
        return np.zeros(0)
    try:
        return np.asarray(payloads, dtype=np.float64)
    except (TypeError, ValueError):
        out = np.empty(len(payloads), dtype=object)
        out[:] = payloads
        return out


def _unwrap_meshes(meshes):
    if isinstance(meshes, (BoundMeshSet, BoundPartMeshes, BoundFaceMesh)):
        return meshes._kernel
    if isinstance(meshes, (list, tuple)):
        return [_unwrap_meshes(m) for m in meshes]
    return meshes


# ---------------------------------------------------------------------------
# Module-level API over a default long-lived session
# ---------------------------------------------------------------------------

_default_session = Session()


def read_parts(path, session: Session | None = None) -> list:
    return (session or _default_session).read_parts(path)


def read_meshes(path, session: Session | None = None) -> BoundMeshSet:
    return (session or _default_session).read_meshes(path)


def sample_parts(parts, num_samples: int, fn, **options):
    parts = list(parts)
    session = parts[0]._session if parts else _default_session
    return session.sample_parts(parts, num_samples, fn, **options)


def get_mesh(meshes, parts=None):
    """Merged (vertices, triangles) of a mesh set, part list, or one mesh."""
    if parts is not None:
        parts = [p._kernel if isinstance(p, BoundPart) else p for p in parts]
    return _kernel_get_mesh(_unwrap_meshes(meshes), parts=parts)


def builtin_callbacks() -> dict:
    """Kernel's stock callbacks adapted to bound part/topo handles."""
    def adapt(cb):
        def call(part, topo, params):
            return cb(part._kernel, topo._kernel, params)
        return call
    return {name: adapt(cb)
            for name, cb in _kernel_builtin_callbacks().items()}
