"""brepkit: a B-rep solid-model interchange toolkit.

Reads and writes parts (trimmed parametric surfaces plus half-edge
topology plus optional face meshes) in a hierarchical HDF5 layout,
evaluates the geometry to arbitrary derivative order, validates model
invariants, samples labeled point clouds, and merges face meshes.
"""

from .errors import (BrepError, CallbackError, DomainError, FormatError,
                     InconsistentTopologyError, OpenLoopError,
                     SingularJetError, UnknownMutationError,
                     UnreadableFileError, UnsupportedKindError,
                     ValidationError)
from .io_hdf5 import (FileHandle, FileReport, read_meshes, read_parts,
                      validate_file, write_parts)
from .meshing import get_mesh, mesh_failure_rate, weld_vertices
from .model import (BSplineCurve, BSplineSurface, Circle, ConeSurface,
                    CylinderSurface, Edge, Ellipse, ExtrusionSurface, Face,
                    FaceMesh, GeometryStore, Halfedge, Line, Loop,
                    OffsetSurface, OtherCurve, OtherSurface, Part,
                    PlaneSurface, RevolutionSurface, Shell, Solid,
                    SphereSurface, TopologyStore, TorusSurface, Violation,
                    parts_equal, validate_part)
from .sampling import (SamplePoint, SampleReport, SamplerConfig, add_noise,
                       builtin_callbacks, sample_parts, sample_parts_detailed)
from .surfaces import curvature, eval_surface, surface_jet, surface_normal
from .curves import curve_jet, eval_curve
from .topology import TopoRef, euler_characteristic, face_oriented_normal
from .trimming import build_trim_region, point_in_face, points_in_face

__version__ = "0.1.0"

__all__ = [
    "BrepError", "CallbackError", "DomainError", "FormatError",
    "InconsistentTopologyError", "OpenLoopError", "SingularJetError",
    "UnknownMutationError", "UnreadableFileError", "UnsupportedKindError",
    "ValidationError",
    "FileHandle", "FileReport", "read_meshes", "read_parts",
    "validate_file", "write_parts",
    "get_mesh", "mesh_failure_rate", "weld_vertices",
    "BSplineCurve", "BSplineSurface", "Circle", "ConeSurface",
    "CylinderSurface", "Edge", "Ellipse", "ExtrusionSurface", "Face",
    "FaceMesh", "GeometryStore", "Halfedge", "Line", "Loop",
    "OffsetSurface", "OtherCurve", "OtherSurface", "Part", "PlaneSurface",
    "RevolutionSurface", "Shell", "Solid", "SphereSurface", "TopologyStore",
    "TorusSurface", "Violation", "parts_equal", "validate_part",
    "SamplePoint", "SampleReport", "SamplerConfig", "add_noise",
    "builtin_callbacks", "sample_parts", "sample_parts_detailed",
    "curvature", "eval_surface", "surface_jet", "surface_normal",
    "curve_jet", "eval_curve",
    "TopoRef", "euler_characteristic", "face_oriented_normal",
    "build_trim_region", "point_in_face", "points_in_face",
    "__version__",
]
