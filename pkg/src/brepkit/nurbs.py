"""B-spline and NURBS evaluation on full repeated-knot vectors.

Knot vectors store every repetition explicitly, so a curve with ``n``
poles of degree ``p`` carries ``n + p + 1`` knots. All evaluators return
stacked derivative arrays; entry ``k`` is the k-th parametric
derivative, entry 0 the position.

Rational evaluation lifts poles to homogeneous coordinates, evaluates
the polynomial jet there, and projects back with the quotient-rule
recurrence, so any derivative order is exact.
"""

from __future__ import annotations

from math import comb

import numpy as np


def find_span(n: int, degree: int, u: float, knots) -> int:
    """Index of the knot span containing ``u``.

    ``n`` is the pole count minus one. Returns ``i`` with
    ``knots[i] <= u < knots[i + 1]``, clamped so the right domain end
    maps onto the last non-empty span.
    """
    if u >= knots[n + 1]:
        return n
    if u <= knots[degree]:
        return degree
    lo, hi = degree, n + 1
    mid = (lo + hi) // 2
    while u < knots[mid] or u >= knots[mid + 1]:
        if u < knots[mid]:
            hi = mid
        else:
            lo = mid
        mid = (lo + hi) // 2
    return mid


def basis_funs(span: int, u: float, degree: int, knots) -> np.ndarray:
    """The ``degree + 1`` nonzero basis functions at ``u``."""
    out = np.empty(degree + 1)
    left = np.empty(degree + 1)
    right = np.empty(degree + 1)
    out[0] = 1.0
    for j in range(1, degree + 1):
        left[j] = u - knots[span + 1 - j]
        right[j] = knots[span + j] - u
        saved = 0.0
        for r in range(j):
            temp = out[r] / (right[r + 1] + left[j - r])
            out[r] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        out[j] = saved
    return out


def ders_basis_funs(span: int, u: float, degree: int, order: int, knots) -> np.ndarray:
    """Nonzero basis functions and derivatives through ``order`` at ``u``.

    Returns ``(order + 1, degree + 1)``; row ``k`` holds the k-th
    derivatives of the ``degree + 1`` active functions. Rows beyond the
    degree are zero.
    """
    ndu = np.empty((degree + 1, degree + 1))
    a = np.empty((2, degree + 1))
    left = np.empty(degree + 1)
    right = np.empty(degree + 1)
    ders = np.zeros((order + 1, degree + 1))

    ndu[0, 0] = 1.0
    for j in range(1, degree + 1):
        left[j] = u - knots[span + 1 - j]
        right[j] = knots[span + j] - u
        saved = 0.0
        for r in range(j):
            ndu[j, r] = right[r + 1] + left[j - r]
            temp = ndu[r, j - 1] / ndu[j, r]
            ndu[r, j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j, j] = saved

    ders[0, :] = ndu[:, degree]
    for r in range(degree + 1):
        s1, s2 = 0, 1
        a[0, 0] = 1.0
        for k in range(1, min(order, degree) + 1):
            d = 0.0
            rk, pk = r - k, degree - k
            if r >= k:
                a[s2, 0] = a[s1, 0] / ndu[pk + 1, rk]
                d = a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if r - 1 <= pk else degree - r
            for j in range(j1, j2 + 1):
                a[s2, j] = (a[s1, j] - a[s1, j - 1]) / ndu[pk + 1, rk + j]
                d += a[s2, j] * ndu[rk + j, pk]
            if r <= pk:
                a[s2, k] = -a[s1, k - 1] / ndu[pk + 1, r]
                d += a[s2, k] * ndu[r, pk]
            ders[k, r] = d
            s1, s2 = s2, s1

    fac = float(degree)
    for k in range(1, min(order, degree) + 1):
        ders[k, :] *= fac
        fac *= degree - k
    return ders


def bspline_curve_derivs(poles, knots, degree: int, u: float, order: int) -> np.ndarray:
    """Polynomial curve jet: ``(order + 1, dim)`` array of derivatives."""
    poles = np.asarray(poles, dtype=np.float64)
    n = poles.shape[0] - 1
    span = find_span(n, degree, u, knots)
    nd = ders_basis_funs(span, u, degree, order, knots)
    window = poles[span - degree:span + 1]
    return nd @ window


def rational_project(hom_ders: np.ndarray) -> np.ndarray:
    """Project homogeneous derivatives ``(A_k, w_k)`` to euclidean ones.

    ``hom_ders`` is ``(order + 1, dim + 1)`` with the weight in the last
    column. Applies the quotient-rule recurrence
    ``C_k = (A_k - sum_i binom(k, i) w_i C_{k-i}) / w_0``.
    """
    order = hom_ders.shape[0] - 1
    dim = hom_ders.shape[1] - 1
    aders = hom_ders[:, :dim]
    wders = hom_ders[:, dim]
    out = np.empty((order + 1, dim))
    for k in range(order + 1):
        v = aders[k].copy()
        for i in range(1, k + 1):
            v -= comb(k, i) * wders[i] * out[k - i]
        out[k] = v / wders[0]
    return out


def nurbs_curve_derivs(poles, weights, knots, degree: int, u: float,
                       order: int) -> np.ndarray:
    """Rational curve jet: ``(order + 1, dim)`` array of derivatives."""
    poles = np.asarray(poles, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)[:, None]
    hom = np.concatenate([poles * w, w], axis=1)
    return rational_project(bspline_curve_derivs(hom, knots, degree, u, order))


def bspline_surface_derivs(poles, u_knots, v_knots, u_degree: int, v_degree: int,
                           u: float, v: float, order: int) -> np.ndarray:
    """Polynomial surface jet.

    Returns ``(order + 1, order + 1, dim)``; entry ``[k, l]`` is
    d^(k+l) S / du^k dv^l. Entries with ``k + l > order`` are zero.
    """
    poles = np.asarray(poles, dtype=np.float64)
    nu, nv = poles.shape[0] - 1, poles.shape[1] - 1
    uspan = find_span(nu, u_degree, u, u_knots)
    vspan = find_span(nv, v_degree, v, v_knots)
    nd_u = ders_basis_funs(uspan, u, u_degree, order, u_knots)
    nd_v = ders_basis_funs(vspan, v, v_degree, order, v_knots)
    window = poles[uspan - u_degree:uspan + 1, vspan - v_degree:vspan + 1]
    # temp[k, j, :] = sum_i Nu_k(i) * P[i, j, :]
    temp = np.einsum("ki,ijd->kjd", nd_u, window)
    out = np.einsum("lj,kjd->kld", nd_v, temp)
    for k in range(order + 1):
        for l in range(order + 1):
            if k + l > order:
                out[k, l] = 0.0
    return out


def rational_project_surface(hom_ders: np.ndarray) -> np.ndarray:
    """Surface analogue of :func:`rational_project`.

    ``hom_ders`` is ``(order + 1, order + 1, dim + 1)``; the recurrence
    runs over both parametric directions with a double binomial sum.
    """
    order = hom_ders.shape[0] - 1
    dim = hom_ders.shape[2] - 1
    aders = hom_ders[..., :dim]
    wders = hom_ders[..., dim]
    out = np.zeros((order + 1, order + 1, dim))
    for k in range(order + 1):
        for l in range(order + 1 - k):
            v = aders[k, l].copy()
            for j in range(1, l + 1):
                v -= comb(l, j) * wders[0, j] * out[k, l - j]
            for i in range(1, k + 1):
                v -= comb(k, i) * wders[i, 0] * out[k - i, l]
                v2 = np.zeros(dim)
                for j in range(1, l + 1):
                    v2 += comb(l, j) * wders[i, j] * out[k - i, l - j]
                v -= comb(k, i) * v2
            out[k, l] = v / wders[0, 0]
    return out


def nurbs_surface_derivs(poles, weights, u_knots, v_knots, u_degree: int,
                         v_degree: int, u: float, v: float, order: int) -> np.ndarray:
    """Rational surface jet: ``(order + 1, order + 1, dim)``."""
    poles = np.asarray(poles, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)[..., None]
    hom = np.concatenate([poles * w, w], axis=2)
    return rational_project_surface(
        bspline_surface_derivs(hom, u_knots, v_knots, u_degree, v_degree, u, v, order))


def knot_domain(knots, degree: int, n_poles: int):
    """Parametric domain ``[knots[degree], knots[n_poles]]``."""
    return float(knots[degree]), float(knots[n_poles])
