"""Sphere-product and radial quadrature backing the trace functionals.

Design: smooth periodic integrands on spheres get spectrally accurate
product rules (trapezoid in angles, Gauss-Legendre in the polar variable),
so a refinement loop that doubles the resolution converges after very few
rounds and the last increment is an honest error estimate.  Radial
integrals over |xi| <= tau use dyadic Gauss-Legendre panels.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.special import roots_gegenbauer, roots_legendre

from .errors import NonConvergenceError, ValidationError


def sphere_rule(d: int, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes and weights on the unit sphere S^{d-1}.

    Returns ``(points, weights)`` with ``points`` of shape (N, d) and
    ``sum(weights)`` converging to vol(S^{d-1}).  The rule is:

    * d=1: the two points of S^0 with counting measure (exact),
    * d=2: ``4*resolution`` equispaced angles (periodic trapezoid),
    * d=3: ``resolution`` Gauss-Legendre nodes in the polar cosine times
      ``2*resolution`` equispaced azimuths,
    * d>=4: Gauss-Gegenbauer nodes in the polar cosine (weight
      (1-t^2)^((d-3)/2)) tensored with a rule on S^{d-2}.
    """
    if d < 1:
        raise ValidationError(f"sphere dimension must be >= 1, got d={d}")
    if resolution < 1:
        raise ValidationError("resolution must be >= 1")
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if d == 2:
        n = 4 * resolution
        ang = 2.0 * np.pi * np.arange(n) / n
        pts = np.column_stack([np.cos(ang), np.sin(ang)])
        return pts, np.full(n, 2.0 * np.pi / n)
    if d == 3:
        mu, w = roots_legendre(resolution)
    else:
        # Gauss-Gegenbauer carries the polar surface factor (1-mu^2)^((d-3)/2)
        mu, w = roots_gegenbauer(resolution, (d - 2) / 2.0)
    if d == 3:
        n_az = 2 * resolution
        ang = 2.0 * np.pi * np.arange(n_az) / n_az
        sub_pts = np.column_stack([np.cos(ang), np.sin(ang)])
        sub_w = np.full(n_az, 2.0 * np.pi / n_az)
        sin_mu = np.sqrt(np.maximum(0.0, 1.0 - mu * mu))
        pts = np.concatenate(
            [
                (sin_mu[:, None, None] * sub_pts[None, :, :]).reshape(-1, 2),
                np.repeat(mu, n_az)[:, None],
            ],
            axis=1,
        )
        wts = (w[:, None] * sub_w[None, :]).ravel()
        return pts, wts
    # d >= 4: equatorial sphere S^{d-2} scaled by sin(phi), last axis cos(phi)
    sub_pts, sub_w = sphere_rule(d - 1, resolution)
    sin_mu = np.sqrt(np.maximum(0.0, 1.0 - mu * mu))
    pts = np.concatenate(
        [
            (sin_mu[:, None, None] * sub_pts[None, :, :]).reshape(-1, d - 1),
            np.repeat(mu, sub_pts.shape[0])[:, None],
        ],
        axis=1,
    )
    wts = (w[:, None] * sub_w[None, :]).ravel()
    return pts, wts


def corner_integral(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    d: int,
    tol: float = 1e-10,
    max_rounds: int = 6,
    start_resolution: int = 4,
) -> tuple[float, float]:
    """Tensor quadrature of f(omega, theta) over S^{d-1} x S^{d-1}.

    Doubles the sphere resolution until the value moves by at most
    ``tol * max(1, |I|)``; returns ``(value, error_estimate)`` where the
    estimate is the last refinement increment.

    Raises NonConvergenceError when the budget of refinement rounds is
    exhausted without meeting the tolerance.
    """
    prev = None
    res = start_resolution
    for _ in range(max_rounds):
        pts, wts = sphere_rule(d, res)
        vals = f(pts[:, None, :], pts[None, :, :])
        val = float(np.einsum("i,j,ij->", wts, wts, vals))
        if d == 1:
            # S^0 rule is exact; a second round would be identical
            return val, 0.0
        if prev is not None:
            err = abs(val - prev)
            if err <= tol * max(1.0, abs(val)):
                return val, err
        prev = val
        res *= 2
    raise NonConvergenceError(
        f"corner quadrature did not reach tol={tol:g} within {max_rounds} refinements"
    )


def ball_integral_radial(
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    d: int,
    radii: np.ndarray,
    sphere_resolution: int,
    gauss_order: int = 24,
) -> np.ndarray:
    """Cumulative integrals of g over the balls |xi| <= radii (increasing).

    ``g(eta, r)`` must accept a batch of unit directions ``eta`` of shape
    (N, 1, d) and radii ``r`` of shape (1, M) and return values of shape
    (N, M); the integral computed is
    ``int_{|xi|<=R} g(xi/|xi|, |xi|) dxi`` for each R in ``radii``.

    Panels are [0, radii[0]] split dyadically plus one panel per
    consecutive pair, each with a Gauss-Legendre rule, so smooth integrands
    are resolved to near machine precision.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or len(radii) < 1 or np.any(np.diff(radii) <= 0) or radii[0] <= 0:
        raise ValidationError("radii must be a strictly increasing positive sequence")
    pts, wts = sphere_rule(d, sphere_resolution)
    # panel edges: dyadic refinement of [0, radii[0]] then the given radii
    first = [radii[0]]
    while first[-1] > 1.0:
        first.append(first[-1] / 2.0)
    edges = np.concatenate([[0.0], np.array(first[::-1]), radii[1:]])
    nodes, gw = roots_legendre(gauss_order)
    out = np.empty(len(radii))
    acc = 0.0
    k = 0
    for a, b in zip(edges[:-1], edges[1:]):
        r = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        w = 0.5 * (b - a) * gw
        vals = g(pts[:, None, :], r[None, :])  # (N, m)
        acc += float(np.einsum("i,j,ij->", wts, w * r ** (d - 1), vals))
        while k < len(radii) and abs(b - radii[k]) <= 1e-12 * max(1.0, radii[k]):
            out[k] = acc
            k += 1
    if k != len(radii):
        raise ValidationError("radii must be reachable as panel edges")
    return out


def richardson_limit(h: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Neville extrapolation of samples y(h) to h -> 0.

    Assumes y = L + c1 h + c2 h^2 + ...; returns ``(L, error_estimate)``
    with the estimate taken from the last two diagonal entries of the
    extrapolation tableau.
    """
    h = np.asarray(h, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(h) != len(y) or len(h) < 2:
        raise ValidationError("richardson_limit needs >= 2 samples")
    n = len(h)
    tab = y.astype(float).copy()
    diag = [tab[-1]]
    for j in range(1, n):
        # tab[i] holds T_{i, j-1}; update in place to T_{i, j}
        for i in range(n - 1, j - 1, -1):
            tab[i] = tab[i] + (tab[i] - tab[i - 1]) * h[i] / (h[i - j] - h[i])
        diag.append(tab[-1])
    err = abs(diag[-1] - diag[-2]) if n >= 2 else np.inf
    return float(diag[-1]), float(err)
