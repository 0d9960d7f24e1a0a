"""Independent oracles used to freeze and check expected values.

Nothing here calls the package's Welzl, enclosing-cap or set-cover code.
"""

import itertools
import math

import numpy as np
from scipy.optimize import nnls


def fibonacci_sphere(m):
    k = np.arange(m) + 0.5
    z = 1 - 2 * k / m
    r = np.sqrt(1 - z * z)
    phi = math.pi * (3 - math.sqrt(5)) * k
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def grid_min_cap_radius(points, m=10**6):
    """Smallest max-angle over a Fibonacci grid of directions on S^2."""
    grid = fibonacci_sphere(m)
    worst = np.min(grid @ np.asarray(points).T, axis=1)
    j = int(np.argmax(worst))
    return math.acos(min(1.0, worst[j])), grid[j]


def hull_distance(points):
    """Distance from the origin to the convex hull of ``points`` (rows).

    Solved as a penalized NNLS: min ||P^T l||^2 + w^2 (sum l - 1)^2, l >= 0.
    """
    p = np.atleast_2d(points)
    w = 1e4
    a = np.vstack([p.T, w * np.ones(p.shape[0])])
    b = np.append(np.zeros(p.shape[1]), w)
    lam, _ = nnls(a, b)
    lam = lam / lam.sum()
    return float(np.linalg.norm(lam @ p))


def fits_in_cap(points, radius):
    """Whether ``points`` lie in some cap of ``radius`` < pi/2 (hull-distance duality)."""
    return hull_distance(points) >= math.cos(radius) - 1e-9


def brute_multiplicity(centers, radius):
    """Largest subset fitting in one cap, testing every subset."""
    k = len(centers)
    best = 0
    for mask in range(1, 1 << k):
        idx = [i for i in range(k) if (mask >> i) & 1]
        if len(idx) > best and fits_in_cap(centers[idx], radius):
            best = len(idx)
    return best


def brute_circle(points):
    """Minimum enclosing circle radius in the plane from all pair/triple circles."""
    p = np.atleast_2d(points)
    if len(p) == 1:
        return 0.0
    best = math.inf

    def encloses(c, r):
        return np.all(np.linalg.norm(p - c, axis=1) <= r + 1e-12)

    for i, j in itertools.combinations(range(len(p)), 2):
        c = (p[i] + p[j]) / 2
        r = float(np.linalg.norm(p[i] - c))
        if r < best and encloses(c, r):
            best = r
    for i, j, k in itertools.combinations(range(len(p)), 3):
        a, b, c = p[i], p[j], p[k]
        d = 2 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
        if abs(d) < 1e-14:
            continue
        ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])) / d
        uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])) / d
        center = np.array([ux, uy])
        r = float(np.linalg.norm(a - center))
        if r < best and encloses(center, r):
            best = r
    return best


def brute_cover_number(points, d, coverable=None):
    """Fewest groups partitioning ``points`` with each group coverable, by DP over masks."""
    p = np.atleast_2d(points)
    m = len(p)
    if coverable is None:
        def coverable(idx):
            return brute_circle(p[idx]) <= d / 2 + 1e-9
    ok = [False] * (1 << m)
    for mask in range(1, 1 << m):
        ok[mask] = coverable([i for i in range(m) if (mask >> i) & 1])
    best = [0] + [math.inf] * ((1 << m) - 1)
    for mask in range(1, 1 << m):
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        while True:
            block = sub | low
            if ok[block]:
                best[mask] = min(best[mask], best[mask ^ block] + 1)
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return best[(1 << m) - 1]


def brute_direction_cover(points, alpha):
    """Fewest directions illuminating every apex, over all feasible apex groups."""
    x = np.atleast_2d(points)
    radius = math.pi / 2 - alpha
    return brute_cover_number(x, None, coverable=lambda idx: fits_in_cap(-x[idx], radius))
