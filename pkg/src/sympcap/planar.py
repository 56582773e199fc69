"""Planar convex hulls, shoelace areas and the planar Rogers-Shephard check."""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, QhullError


def hull(points) -> np.ndarray:
    """Counter-clockwise vertices of the convex hull of 2D ``points``."""
    P = np.asarray(points, dtype=float)
    try:
        return P[ConvexHull(P).vertices]
    except QhullError:
        return P[:0]


def shoelace(polygon) -> float:
    """Signed area of a closed polygon given by its ordered vertices."""
    P = np.asarray(polygon, dtype=float)
    if len(P) < 3:
        return 0.0
    x, y = P[:, 0], P[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def hull_area(points) -> float:
    return abs(shoelace(hull(points)))


def edge_rows(polygon) -> np.ndarray:
    """H-rows ``a`` with ``a . x <= 1`` for a CCW polygon containing 0 strictly."""
    P = np.asarray(polygon, dtype=float)
    Q = np.roll(P, -1, axis=0)
    normals = np.column_stack([Q[:, 1] - P[:, 1], P[:, 0] - Q[:, 0]])
    offsets = np.einsum("ij,ij->i", normals, P)
    if (offsets <= 0).any():
        raise ValueError("origin is not interior to polygon")
    return normals / offsets[:, None]


def rs_planar_check(polygon, direction):
    """Planar Rogers-Shephard quantities for a symmetric polygon.

    Parameters
    ----------
    polygon : (k, 2) array
        Points whose convex hull is the (centrally symmetric) polygon ``P``.
    direction : (2,) array
        Unit vector ``d``.

    Returns
    -------
    vol : float
        Area of ``P``.
    proj_len : float
        Length of the orthogonal projection of ``P`` onto the line ``R d``.
    sect_len : float
        Length of the chord ``P`` cuts from the line ``d^perp``.

    For symmetric ``P`` one has ``vol <= proj_len * sect_len <= 2 vol``.
    """
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    H = hull(polygon)
    vol = abs(shoelace(H))
    proj = H @ d
    proj_len = float(proj.max() - proj.min())
    rows = edge_rows(H)
    dperp = np.array([-d[1], d[0]])
    # chord through the origin: [-1/g(-dperp), 1/g(dperp)]
    sect_len = float(1.0 / max((rows @ dperp).max(), 0) + 1.0 / max((rows @ -dperp).max(), 0))
    return vol, proj_len, sect_len
