"""Surface evaluation: jets of any order, normals, and curvature.

The jet of a surface at ``(u, v)`` is the triangular array ``J`` with
``J[i, j] = d^(i+j) S / du^i dv^j`` for ``i + j <= order`` (entries
beyond the total order are zero). Offsets differentiate the unit normal
of their base surface analytically, which needs the base jet one order
higher; nesting is capped.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import nurbs
from .curves import PARAM_TOL, TWO_PI, _cos_jet, _sin_jet, curve_jet, curve_period
from .errors import DomainError, SingularJetError, UnsupportedKindError
from .model import (
    BSplineSurface,
    ConeSurface,
    CylinderSurface,
    ExtrusionSurface,
    OffsetSurface,
    OtherSurface,
    PlaneSurface,
    RevolutionSurface,
    SphereSurface,
    Surface,
    TorusSurface,
)

SINGULAR_TOL = 1e-12
MAX_NESTING = 8

_other_surface_evaluator = None


def register_other_surface_evaluator(fn) -> None:
    """Install (or clear, with None) the fallback for Other surfaces."""
    global _other_surface_evaluator
    _other_surface_evaluator = fn


@dataclass(frozen=True)
class SurfaceJet:
    position: np.ndarray
    su: np.ndarray
    sv: np.ndarray
    suu: np.ndarray
    suv: np.ndarray
    svv: np.ndarray


@dataclass(frozen=True)
class CurvatureInfo:
    """Curvatures at one surface point; ``k1 >= k2`` always."""

    gaussian: float
    mean: float
    k1: float
    k2: float
    normal: np.ndarray


def surface_periods(surface: Surface):
    """(u period, v period), None where the direction is not periodic."""
    if isinstance(surface, (CylinderSurface, ConeSurface, SphereSurface)):
        return TWO_PI, None
    if isinstance(surface, TorusSurface):
        return TWO_PI, TWO_PI
    if isinstance(surface, RevolutionSurface):
        return TWO_PI, curve_period(surface.curve)
    if isinstance(surface, ExtrusionSurface):
        return curve_period(surface.curve), None
    if isinstance(surface, BSplineSurface):
        pu = pv = None
        if surface.u_periodic:
            lo, hi = nurbs.knot_domain(surface.u_knots, surface.u_degree,
                                       surface.poles.shape[0])
            pu = hi - lo
        if surface.v_periodic:
            lo, hi = nurbs.knot_domain(surface.v_knots, surface.v_degree,
                                       surface.poles.shape[1])
            pv = hi - lo
        return pu, pv
    if isinstance(surface, OffsetSurface):
        return surface_periods(surface.surface)
    return None, None


def _normalize_axis(x: float, lo: float, hi: float, period, label: str) -> float:
    tol = PARAM_TOL * max(1.0, abs(lo), abs(hi))
    if lo - tol <= x <= hi + tol:
        return min(max(x, lo), hi)
    if period is not None and period > 0:
        w = lo + (x - lo) % period
        if w <= hi + tol:
            return min(max(w, lo), hi)
    raise DomainError(f"surface parameter {label}={x} outside [{lo}, {hi}]")


def normalize_surface_uv(surface: Surface, u: float, v: float):
    """Wrap periodic directions, then bound-check against the trim domain."""
    (u0, u1), (v0, v1) = surface.u_interval, surface.v_interval
    pu, pv = surface_periods(surface)
    return (_normalize_axis(float(u), u0, u1, pu, "u"),
            _normalize_axis(float(v), v0, v1, pv, "v"))


def _circle_dirs(u: float, order: int, ax, ay) -> np.ndarray:
    """Rows of d^i/du^i (cos u * ax + sin u * ay)."""
    cj = _cos_jet(u, order)[:, None]
    sj = _sin_jet(u, order)[:, None]
    return cj * ax + sj * ay


def _raw_surface_jet(s: Surface, u: float, v: float, order: int,
                     depth: int) -> np.ndarray:
    out = np.zeros((order + 1, order + 1, 3))

    if isinstance(s, PlaneSurface):
        out[0, 0] = s.location + u * s.x_axis + v * s.y_axis
        if order >= 1:
            out[1, 0] = s.x_axis
            out[0, 1] = s.y_axis
        return out

    if isinstance(s, CylinderSurface):
        ring = _circle_dirs(u, order, s.x_axis, s.y_axis)
        out[: order + 1, 0] = s.radius * ring
        out[0, 0] += s.location + v * s.z_axis
        if order >= 1:
            out[0, 1] = s.z_axis
        return out

    if isinstance(s, ConeSurface):
        ring = _circle_dirs(u, order, s.x_axis, s.y_axis)
        sa, ca = np.sin(s.angle), np.cos(s.angle)
        out[: order + 1, 0] = (s.radius + v * sa) * ring
        out[0, 0] += s.location + v * ca * s.z_axis
        for i in range(order):
            out[i, 1] = sa * ring[i]
        if order >= 1:
            out[0, 1] += ca * s.z_axis
        return out

    if isinstance(s, SphereSurface):
        ring = _circle_dirs(u, order, s.x_axis, s.y_axis)
        cv = _cos_jet(v, order)
        sv = _sin_jet(v, order)
        for j in range(order + 1):
            for i in range(order + 1 - j):
                out[i, j] = s.radius * cv[j] * ring[i]
            out[0, j] += s.radius * sv[j] * s.z_axis
        out[0, 0] += s.location
        return out

    if isinstance(s, TorusSurface):
        ring = _circle_dirs(u, order, s.x_axis, s.y_axis)
        cv = _cos_jet(v, order)
        sv = _sin_jet(v, order)
        for j in range(order + 1):
            fj = s.max_radius + s.min_radius * cv[0] if j == 0 else s.min_radius * cv[j]
            for i in range(order + 1 - j):
                out[i, j] = fj * ring[i]
            out[0, j] += s.min_radius * sv[j] * s.z_axis
        out[0, 0] += s.location
        return out

    if isinstance(s, BSplineSurface):
        if s.rational:
            w = s.weights
            if w is None:
                w = np.ones(s.poles.shape[:2])
            return nurbs.nurbs_surface_derivs(
                s.poles, w, s.u_knots, s.v_knots, s.u_degree, s.v_degree,
                u, v, order)
        return nurbs.bspline_surface_derivs(
            s.poles, s.u_knots, s.v_knots, s.u_degree, s.v_degree, u, v, order)

    if isinstance(s, ExtrusionSurface):
        cj = curve_jet(s.curve, u, order)
        out[: order + 1, 0] = cj
        out[0, 0] += v * s.direction
        if order >= 1:
            out[0, 1] = s.direction
        return out

    if isinstance(s, RevolutionSurface):
        gj = curve_jet(s.curve, v, order)
        a = s.z_axis / np.linalg.norm(s.z_axis)
        cu = _cos_jet(u, order)
        su_ = _sin_jet(u, order)
        for j in range(order + 1):
            w = gj[j] - s.location if j == 0 else gj[j]
            axial = a * float(np.dot(a, w))
            radial = w - axial
            swirl = np.cross(a, w)
            for i in range(order + 1 - j):
                out[i, j] = radial * cu[i] + swirl * su_[i]
            out[0, j] += axial
        out[0, 0] += s.location
        return out

    if isinstance(s, OffsetSurface):
        base = _surface_jet_checked(s.surface, u, v, order + 1, depth + 1)
        n = _normal_jet(base, order)
        for i in range(order + 1):
            for j in range(order + 1 - i):
                out[i, j] = base[i, j] + s.value * n[i, j]
        return out

    if isinstance(s, OtherSurface):
        if _other_surface_evaluator is not None:
            return np.asarray(_other_surface_evaluator(s, u, v, order),
                              dtype=np.float64)
        raise UnsupportedKindError(
            "surface kind 'Other' has no registered evaluator")

    raise UnsupportedKindError(f"unknown surface kind {type(s).__name__}")


def _normal_jet(base: np.ndarray, order: int) -> np.ndarray:
    """Derivatives of the unit normal from a base jet of order ``order + 1``.

    Three triangular solves: the cross-product field m = Su x Sv by the
    Leibniz rule, its magnitude g from m.m = g^2, and the unit normal n
    from m = g n.
    """
    m = np.zeros((order + 1, order + 1, 3))
    for i in range(order + 1):
        for j in range(order + 1 - i):
            acc = np.zeros(3)
            for p in range(i + 1):
                cp = comb(i, p)
                for q in range(j + 1):
                    acc += cp * comb(j, q) * np.cross(
                        base[p + 1, q], base[i - p, j - q + 1])
            m[i, j] = acc

    g = np.zeros((order + 1, order + 1))
    g[0, 0] = float(np.linalg.norm(m[0, 0]))
    if g[0, 0] < SINGULAR_TOL:
        raise SingularJetError(
            f"surface jet is singular: |Su x Sv| = {g[0, 0]:.3e}")
    for total in range(1, order + 1):
        for i in range(total + 1):
            j = total - i
            if i > order or j > order:
                continue
            rhs = 0.0
            for p in range(i + 1):
                cp = comb(i, p)
                for q in range(j + 1):
                    rhs += cp * comb(j, q) * float(np.dot(m[p, q], m[i - p, j - q]))
            for p in range(i + 1):
                cp = comb(i, p)
                for q in range(j + 1):
                    if (p, q) in ((0, 0), (i, j)):
                        continue
                    rhs -= cp * comb(j, q) * g[p, q] * g[i - p, j - q]
            g[i, j] = rhs / (2.0 * g[0, 0])

    n = np.zeros((order + 1, order + 1, 3))
    n[0, 0] = m[0, 0] / g[0, 0]
    for total in range(1, order + 1):
        for i in range(total + 1):
            j = total - i
            if i > order or j > order:
                continue
            acc = m[i, j].copy()
            for p in range(i + 1):
                cp = comb(i, p)
                for q in range(j + 1):
                    if (p, q) == (0, 0):
                        continue
                    acc -= cp * comb(j, q) * g[p, q] * n[i - p, j - q]
            n[i, j] = acc / g[0, 0]
    return n


def _apply_transform_uv(jet: np.ndarray, transform) -> np.ndarray:
    if transform is None:
        return jet
    r = transform[:, :3]
    out = jet @ r.T
    out[0, 0] += transform[:, 3]
    return out


def _surface_jet_checked(s: Surface, u: float, v: float, order: int,
                         depth: int) -> np.ndarray:
    if depth > MAX_NESTING:
        raise UnsupportedKindError(
            f"surface nesting deeper than {MAX_NESTING}")
    u, v = normalize_surface_uv(s, u, v)
    return _apply_transform_uv(_raw_surface_jet(s, u, v, order, depth),
                               s.transform)


def surface_jet(surface: Surface, u: float, v: float, order: int = 2) -> np.ndarray:
    """Triangular derivative array ``(order + 1, order + 1, 3)``."""
    return _surface_jet_checked(surface, u, v, order, 0)


def eval_surface(surface: Surface, u: float, v: float) -> SurfaceJet:
    """Second-order jet: position, Su, Sv, Suu, Suv, Svv."""
    j = surface_jet(surface, u, v, 2)
    return SurfaceJet(position=j[0, 0], su=j[1, 0], sv=j[0, 1],
                      suu=j[2, 0], suv=j[1, 1], svv=j[0, 2])


def surface_normal(surface: Surface, u: float, v: float,
                   orientation: bool = True) -> np.ndarray:
    """Unit normal ``Su x Sv / |Su x Sv|``, negated when ``orientation``
    is False."""
    j = surface_jet(surface, u, v, 1)
    m = np.cross(j[1, 0], j[0, 1])
    g = float(np.linalg.norm(m))
    if g < SINGULAR_TOL:
        raise SingularJetError(
            f"normal undefined at (u={u}, v={v}): |Su x Sv| = {g:.3e}")
    n = m / g
    return n if orientation else -n


def first_fundamental_density(surface: Surface, u: float, v: float) -> float:
    """Area density ``sqrt(EG - F^2) = |Su x Sv|``; 0 at singular points."""
    j = surface_jet(surface, u, v, 1)
    return float(np.linalg.norm(np.cross(j[1, 0], j[0, 1])))


def curvature(surface: Surface, u: float, v: float) -> CurvatureInfo:
    """Gaussian/mean/principal curvatures from the fundamental forms."""
    j = surface_jet(surface, u, v, 2)
    su, sv = j[1, 0], j[0, 1]
    m = np.cross(su, sv)
    g = float(np.linalg.norm(m))
    if g < SINGULAR_TOL:
        raise SingularJetError(
            f"curvature undefined at (u={u}, v={v}): |Su x Sv| = {g:.3e}")
    n = m / g
    ee = float(np.dot(su, su))
    ff = float(np.dot(su, sv))
    gg = float(np.dot(sv, sv))
    ll = float(np.dot(n, j[2, 0]))
    mm = float(np.dot(n, j[1, 1]))
    nn = float(np.dot(n, j[0, 2]))
    denom = ee * gg - ff * ff
    gauss = (ll * nn - mm * mm) / denom
    mean = (ee * nn - 2.0 * ff * mm + gg * ll) / (2.0 * denom)
    disc = np.sqrt(max(mean * mean - gauss, 0.0))
    return CurvatureInfo(gaussian=gauss, mean=mean,
                         k1=mean + disc, k2=mean - disc, normal=n)
