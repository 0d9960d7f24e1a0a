"""Minimum enclosing Euclidean ball (move-to-front Welzl recursion)."""

import numpy as np

_REL_TOL = 1e-12


def _circumball(support):
    """Smallest ball with every point of ``support`` on its boundary.

    The center is constrained to the affine hull of the support. Affinely
    dependent supports fall back to a least-squares solve.
    """
    s = np.asarray(support, dtype=np.float64)
    if s.shape[0] == 1:
        return s[0].copy(), 0.0
    p0 = s[0]
    u = s[1:] - p0
    gram = u @ u.T
    rhs = 0.5 * np.einsum("ij,ij->i", u, u)
    try:
        lam = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        lam = np.linalg.lstsq(gram, rhs, rcond=None)[0]
    center = p0 + lam @ u
    r2 = max(float(np.max(np.einsum("ij,ij->i", s - center, s - center))), 0.0)
    return center, r2


def _inside(p, center, r2):
    d = p - center
    return float(d @ d) <= r2 * (1.0 + 1e-10) + _REL_TOL


def _mtf(pts, order, end, support, dim):
    """Welzl's move-to-front recursion over ``order[:end]``.

    ``order`` is a list of point indices and is permuted in place.
    """
    if support:
        center, r2 = _circumball(pts[support])
    else:
        center, r2 = None, -1.0
    best_support = list(support)
    if len(support) == dim + 1:
        return center, r2, best_support
    i = 0
    while i < end:
        idx = order[i]
        if center is None or not _inside(pts[idx], center, r2):
            center, r2, best_support = _mtf(pts, order, i, support + [idx], dim)
            # move to front
            order.pop(i)
            order.insert(0, idx)
        i += 1
    return center, r2, best_support


def _essential(pts, support, center):
    """Drop support points carrying zero barycentric weight for ``center``."""
    if len(support) <= 1:
        return list(support)
    s = pts[support]
    a = np.vstack([s.T, np.ones(len(support))])
    b = np.append(center, 1.0)
    lam = np.linalg.lstsq(a, b, rcond=None)[0]
    keep = [idx for idx, w in zip(support, lam) if w > 1e-9]
    return keep or list(support)


def min_enclosing_ball(points):
    """Return ``(center, radius, support)`` of the smallest enclosing ball.

    ``support`` lists the indices of at most ``dim + 1`` input points that
    lie on the boundary and pin the ball down.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.shape[0] == 0:
        raise ValueError("min_enclosing_ball needs at least one point")
    dim = pts.shape[1]
    order = list(range(pts.shape[0]))
    center, r2, support = _mtf(pts, order, len(order), [], dim)
    # One more pass catches points lost to round-off in deep recursion.
    for _ in range(3):
        d2 = np.einsum("ij,ij->i", pts - center, pts - center)
        worst = int(np.argmax(d2))
        if d2[worst] <= r2 * (1.0 + 1e-9) + 1e-14:
            break
        order.remove(worst)
        order.insert(0, worst)
        center, r2, support = _mtf(pts, order, len(order), [], dim)
    d2 = np.einsum("ij,ij->i", pts - center, pts - center)
    radius = float(np.sqrt(max(float(d2.max()), 0.0)))
    return center, radius, sorted(_essential(pts, support, center))
