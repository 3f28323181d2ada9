import dataclasses
import zlib

import numpy as np
import pytest

from _oracles import fd_curve_jet, random_curve, rel_err, smooth_bspline_curve
from brepkit.curves import (curve_jet, curve_period, curve_points,
                            curve_speeds, eval_curve,
                            normalize_curve_parameter,
                            register_other_curve_evaluator)
from brepkit.errors import DomainError, UnsupportedKindError
from brepkit.model import BSplineCurve, Circle, Line, OtherCurve

KINDS = ("Line", "Circle", "Ellipse", "BSpline")


def _seed(*parts) -> int:
    return zlib.crc32("/".join(str(p) for p in parts).encode())


def _fd_domain(curve):
    """Domain the FD stencil may evaluate in: periodic curves wrap, so
    the stencil is unconstrained there."""
    if curve_period(curve) is not None:
        return -np.inf, np.inf
    return float(curve.interval[0]), float(curve.interval[1])


def fd_safe_params(curve, rng, count):
    """Parameters whose FD stencils stay inside one smooth piece.

    Splines lose continuity at knot lines, so draws keep 10% of a span
    away from every knot; exactness at the knots themselves is covered
    by the recursive-evaluator comparison.
    """
    lo, hi = float(curve.interval[0]), float(curve.interval[1])
    if not isinstance(curve, BSplineCurve):
        margin = 0.05 * (hi - lo)
        return rng.uniform(lo + margin, hi - margin, count)
    uniq = np.unique(curve.knots)
    uniq = uniq[(uniq >= lo - 1e-12) & (uniq <= hi + 1e-12)]
    spans = np.flatnonzero(np.diff(uniq) > 1e-9)
    picks = rng.choice(spans, size=count)
    frac = rng.uniform(0.1, 0.9, count)
    return uniq[picks] + frac * (uniq[picks + 1] - uniq[picks])


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("transform", [False, True])
def test_jets_match_finite_differences(kind, dim, transform):
    if transform and dim == 2:
        pytest.skip("2D curves carry no transform")
    rng = np.random.default_rng(_seed(kind, dim, transform))
    for trial in range(6):
        c = random_curve(kind, rng, dim=dim, transform=transform)
        for t in fd_safe_params(c, rng, 5):
            jet = curve_jet(c, t, 2)
            d1, d2, boundary = fd_curve_jet(
                lambda x: curve_jet(c, x, 0)[0], t, *_fd_domain(c))
            tol = 1e-4 if boundary else 1e-6
            assert rel_err(jet[1], d1) < tol
            assert rel_err(jet[2], d2) < tol


@pytest.mark.parametrize("kind", ["Line", "BSpline"])
def test_jets_match_finite_differences_at_interval_ends(kind):
    rng = np.random.default_rng(_seed("ends", kind))
    if kind == "BSpline":
        # one Bezier span, so boundary stencils never cross a knot
        c = BSplineCurve(interval=(0.0, 1.0),
                         poles=rng.normal(size=(4, 3)),
                         knots=np.array([0.0, 0, 0, 0, 1, 1, 1, 1]),
                         degree=3)
    else:
        c = random_curve(kind, rng, dim=3)
    lo, hi = _fd_domain(c)
    for t in (lo, hi):
        jet = curve_jet(c, t, 2)
        d1, d2, boundary = fd_curve_jet(
            lambda x: curve_jet(c, x, 0)[0], t, lo, hi)
        assert boundary
        assert rel_err(jet[1], d1) < 1e-4
        assert rel_err(jet[2], d2) < 1e-4


def test_circle_high_order_jets_cycle():
    c = Circle(interval=(0.0, 2 * np.pi), location=(1.0, 2.0, 3.0),
               radius=2.0, x_axis=(1, 0, 0), y_axis=(0, 1, 0))
    t = 0.7
    jet = curve_jet(c, t, 6)
    # derivatives of r(cos t, sin t) advance the phase by pi/2 per order
    for k in range(1, 7):
        want = 2.0 * np.array([np.cos(t + k * np.pi / 2),
                               np.sin(t + k * np.pi / 2), 0.0])
        assert np.allclose(jet[k], want, atol=1e-12)
    assert np.allclose(jet[4], jet[0] - np.array([1.0, 2.0, 3.0]), atol=1e-12)


def test_line_second_derivative_is_zero():
    line = Line(interval=(0.0, 5.0), location=(0.0, 0.0, 0.0),
                direction=(0.6, 0.8, 0.0))
    jet = curve_jet(line, 2.0, 4)
    assert np.allclose(jet[0], [1.2, 1.6, 0.0])
    assert np.allclose(jet[1], [0.6, 0.8, 0.0])
    assert np.allclose(jet[2:], 0.0)


def test_bspline_derivatives_beyond_degree_vanish():
    rng = np.random.default_rng(_seed("beyond"))
    c = smooth_bspline_curve(rng)
    jet = curve_jet(c, 0.99, c.degree + 3)
    assert not np.allclose(jet[c.degree], 0.0)
    assert np.allclose(jet[c.degree + 1:], 0.0, atol=1e-9)


def test_periodic_wrap_is_exact():
    c = Circle(interval=(0.0, 2 * np.pi), location=(0.0, 0.0, 0.0),
               radius=1.5, x_axis=(1, 0, 0), y_axis=(0, 1, 0))
    for t in (0.3, 1.0, 4.0):
        a = curve_jet(c, t, 2)
        b = curve_jet(c, t + 2 * np.pi, 2)
        d = curve_jet(c, t - 6 * np.pi, 2)
        assert np.allclose(a, b, atol=1e-12)
        assert np.allclose(a, d, atol=1e-12)


def test_out_of_domain_raises_for_aperiodic():
    line = Line(interval=(0.0, 1.0), location=(0.0, 0.0), direction=(1.0, 0.0))
    with pytest.raises(DomainError):
        curve_jet(line, 1.5, 0)
    with pytest.raises(DomainError):
        curve_jet(line, -0.5, 0)
    # tolerance band just outside the ends is clamped, not rejected
    assert np.allclose(curve_jet(line, 1.0 + 1e-12, 0)[0], [1.0, 0.0])


def test_normalize_wraps_before_interval_check():
    c = Circle(interval=(0.0, np.pi), location=(0.0, 0.0),
               radius=1.0, x_axis=(1, 0), y_axis=(0, 1))
    assert normalize_curve_parameter(c, 2.5 * np.pi) == pytest.approx(np.pi / 2)
    with pytest.raises(DomainError):
        normalize_curve_parameter(c, 1.5 * np.pi)


def test_periodic_bspline_period_is_knot_domain():
    poles = np.array([[0.0, 0], [1, 0], [1, 1], [0, 1], [0, 0], [1, 0]])
    knots = np.arange(-3.0, 7.0)
    c = BSplineCurve(interval=(0.0, 3.0), poles=poles, knots=knots,
                     degree=3, periodic=True)
    assert curve_period(c) == pytest.approx(3.0)
    a = curve_jet(c, 0.4, 1)
    b = curve_jet(c, 3.4, 1)
    assert np.allclose(a, b, atol=1e-12)


def test_transform_rotates_derivatives_and_shifts_position():
    rng = np.random.default_rng(4)
    base = random_curve("Ellipse", rng, dim=3)
    ang = 0.8
    rot = np.array([[np.cos(ang), -np.sin(ang), 0],
                    [np.sin(ang), np.cos(ang), 0], [0, 0, 1.0]])
    shift = np.array([3.0, -1.0, 2.0])
    moved = dataclasses.replace(base, transform=np.column_stack([rot, shift]))
    t = 1.1
    j0 = curve_jet(base, t, 2)
    j1 = curve_jet(moved, t, 2)
    assert np.allclose(j1[0], rot @ j0[0] + shift, atol=1e-12)
    assert np.allclose(j1[1], rot @ j0[1], atol=1e-12)
    assert np.allclose(j1[2], rot @ j0[2], atol=1e-12)


def test_eval_curve_named_fields():
    line = Line(interval=(0.0, 1.0), location=(0.0, 0.0, 0.0),
                direction=(1.0, 0.0, 0.0))
    out = eval_curve(line, 0.5)
    assert np.allclose(out.position, [0.5, 0, 0])
    assert np.allclose(out.d1, [1, 0, 0])
    assert np.allclose(out.d2, 0)


def test_curve_points_and_speeds():
    c = Circle(interval=(0.0, 2 * np.pi), location=(0.0, 0.0, 0.0),
               radius=2.0, x_axis=(1, 0, 0), y_axis=(0, 1, 0))
    ts = np.linspace(0, np.pi, 7)
    pts = curve_points(c, ts)
    assert pts.shape == (7, 3)
    assert np.allclose(np.linalg.norm(pts, axis=1), 2.0)
    assert np.allclose(curve_speeds(c, ts), 2.0)


def test_other_curve_requires_registered_evaluator():
    other = OtherCurve(interval=(0.0, 1.0), dim=3,
                       attributes={"type": "Helix"})
    with pytest.raises(UnsupportedKindError):
        curve_jet(other, 0.5, 0)


def test_other_curve_fallback_evaluator(monkeypatch):
    import brepkit.curves as curves_mod

    other = OtherCurve(interval=(0.0, 1.0), dim=3, attributes={})
    monkeypatch.setattr(curves_mod, "_other_curve_evaluator", None)

    def helix(curve, t, order):
        jet = np.zeros((order + 1, 3))
        jet[0] = [np.cos(t), np.sin(t), t]
        if order >= 1:
            jet[1] = [-np.sin(t), np.cos(t), 1.0]
        return jet

    register_other_curve_evaluator(helix)
    jet = curve_jet(other, 0.5, 1)
    assert np.allclose(jet[0], [np.cos(0.5), np.sin(0.5), 0.5])


def test_degenerate_zero_direction_line_is_constant():
    line = Line(interval=(0.0, 2 * np.pi), location=(0.0, 0.0, -1.0),
                direction=(0.0, 0.0, 0.0))
    for t in (0.0, 2.0, 6.0):
        jet = curve_jet(line, t, 2)
        assert np.allclose(jet[0], [0, 0, -1])
        assert np.allclose(jet[1:], 0.0)
