"""Curve evaluation: positions and parametric derivatives of any order.

The jet of a curve at ``t`` is the stacked array of derivatives
``[C(t), C'(t), C''(t), ...]``. Analytic kinds differentiate in closed
form (trigonometric derivatives are phase shifts); splines go through
:mod:`brepkit.nurbs`. A stored rigid transform moves the position and
rotates every derivative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import nurbs
from .errors import DomainError, UnsupportedKindError
from .model import BSplineCurve, Circle, Curve, Ellipse, Line, OtherCurve

PARAM_TOL = 1e-9
TWO_PI = 2.0 * np.pi

# Optional evaluator for kind "Other": callable (curve, t, order) -> jet
# rows, or None to leave the kind unsupported.
_other_curve_evaluator = None


def register_other_curve_evaluator(fn) -> None:
    """Install (or clear, with None) the fallback for Other curves."""
    global _other_curve_evaluator
    _other_curve_evaluator = fn


@dataclass(frozen=True)
class CurveJet:
    position: np.ndarray
    d1: np.ndarray
    d2: np.ndarray


def _cos_jet(t: float, order: int) -> np.ndarray:
    # k-th derivative of cos is cos shifted by k * pi/2
    return np.cos(t + np.arange(order + 1) * (np.pi / 2.0))


def _sin_jet(t: float, order: int) -> np.ndarray:
    return np.sin(t + np.arange(order + 1) * (np.pi / 2.0))


def curve_period(curve: Curve):
    """Parametric period, or None for non-periodic curves."""
    if isinstance(curve, (Circle, Ellipse)):
        return TWO_PI
    if isinstance(curve, BSplineCurve) and curve.periodic:
        lo, hi = nurbs.knot_domain(curve.knots, curve.degree, curve.poles.shape[0])
        return hi - lo
    return None


def normalize_curve_parameter(curve: Curve, t: float) -> float:
    """Wrap ``t`` by the period when one exists, then bound-check it."""
    t = float(t)
    t0, t1 = float(curve.interval[0]), float(curve.interval[1])
    tol = PARAM_TOL * max(1.0, abs(t0), abs(t1))
    if t0 - tol <= t <= t1 + tol:
        return min(max(t, t0), t1)
    period = curve_period(curve)
    if period is not None and period > 0:
        w = t0 + (t - t0) % period
        if w <= t1 + tol:
            return min(max(w, t0), t1)
    raise DomainError(
        f"curve parameter {t} outside interval [{t0}, {t1}]")


def _raw_curve_jet(curve: Curve, t: float, order: int) -> np.ndarray:
    if isinstance(curve, Line):
        out = np.zeros((order + 1, curve.dimension))
        out[0] = curve.location + t * curve.direction
        if order >= 1:
            out[1] = curve.direction
        return out

    if isinstance(curve, Circle):
        cj = _cos_jet(t, order)[:, None]
        sj = _sin_jet(t, order)[:, None]
        out = curve.radius * (cj * curve.x_axis + sj * curve.y_axis)
        out[0] += curve.location
        return out

    if isinstance(curve, Ellipse):
        cj = _cos_jet(t, order)[:, None]
        sj = _sin_jet(t, order)[:, None]
        out = curve.maj_radius * cj * curve.x_axis + curve.min_radius * sj * curve.y_axis
        out[0] += 0.5 * (curve.focus1 + curve.focus2)
        return out

    if isinstance(curve, BSplineCurve):
        if curve.rational:
            return nurbs.nurbs_curve_derivs(
                curve.poles, curve.weights, curve.knots, curve.degree, t, order)
        return nurbs.bspline_curve_derivs(
            curve.poles, curve.knots, curve.degree, t, order)

    if isinstance(curve, OtherCurve):
        if _other_curve_evaluator is not None:
            return np.asarray(_other_curve_evaluator(curve, t, order),
                              dtype=np.float64)
        raise UnsupportedKindError(
            "curve kind 'Other' has no registered evaluator")

    raise UnsupportedKindError(f"unknown curve kind {type(curve).__name__}")


def apply_transform_to_jet(jet: np.ndarray, transform) -> np.ndarray:
    """Rotate all jet rows; translate the position row only."""
    if transform is None:
        return jet
    r = transform[:, :3]
    out = jet @ r.T
    out[0] += transform[:, 3]
    return out


def curve_jet(curve: Curve, t: float, order: int = 2) -> np.ndarray:
    """Derivative stack ``(order + 1, dim)``; row k is d^k C / dt^k."""
    t = normalize_curve_parameter(curve, t)
    return apply_transform_to_jet(_raw_curve_jet(curve, t, order), curve.transform)


def eval_curve(curve: Curve, t: float) -> CurveJet:
    """Second-order jet at ``t``: position, first and second derivative."""
    j = curve_jet(curve, t, 2)
    return CurveJet(position=j[0], d1=j[1], d2=j[2])


def curve_points(curve: Curve, ts) -> np.ndarray:
    """Positions at each parameter in ``ts``, stacked ``(len(ts), dim)``."""
    ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
    return np.stack([curve_jet(curve, t, 0)[0] for t in ts])


def curve_speeds(curve: Curve, ts) -> np.ndarray:
    """First-derivative magnitudes |C'(t)| at each parameter."""
    ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
    return np.array([np.linalg.norm(curve_jet(curve, t, 1)[1]) for t in ts])
