"""Spherical geometry primitives on S^{n-1}.

Points and directions are plain float64 numpy arrays of unit norm; angles
are floats in radians. Batches of points are ``(m, n)`` arrays.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .miniball import min_enclosing_ball

ANGLE_TOL = 1e-9
_CLAMP_TOL = 1e-12


class DimensionError(ValueError):
    pass


class DegenerateCenterError(ValueError):
    """The ambient enclosing ball is centered at the origin."""


def angle(value):
    """Validate an angle in [0, pi], clamping round-off within 1e-12."""
    value = float(value)
    if value < -_CLAMP_TOL or value > math.pi + _CLAMP_TOL or math.isnan(value):
        raise ValueError(f"angle {value!r} outside [0, pi]")
    return min(max(value, 0.0), math.pi)


def unit_vector(coords):
    v = np.asarray(coords, dtype=np.float64).reshape(-1)
    if v.size < 2:
        raise DimensionError("unit vectors need dimension n >= 2")
    norm = np.linalg.norm(v)
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("cannot normalize a zero or non-finite vector")
    return v / norm


def basis(n, i, sign=1.0):
    e = np.zeros(n)
    e[i] = sign
    return e


def _check_dims(x, y):
    if x.shape[-1] != y.shape[-1]:
        raise DimensionError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")


def angle_between(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _check_dims(x, y)
    c = float(x @ y) / (np.linalg.norm(x) * np.linalg.norm(y))
    return math.acos(min(1.0, max(-1.0, c)))


def angles_between(points, y):
    """Vectorized angle from each row of ``points`` to ``y``."""
    points = np.atleast_2d(points)
    _check_dims(points, np.asarray(y))
    return np.arccos(np.clip(points @ y, -1.0, 1.0))


def chord_from_angle(theta):
    return 2.0 * math.sin(float(theta) / 2.0)


@dataclass(frozen=True)
class SphericalCap:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if not 0.0 < self.radius < math.pi:
            raise ValueError(f"cap radius must lie in (0, pi), got {self.radius}")

    @property
    def dim(self):
        return self.center.shape[0]


def cap_contains(cap, y, tol=_CLAMP_TOL):
    return angle_between(cap.center, y) <= cap.radius + tol


# --------------------------------------------------------------------------
# cap measure
# --------------------------------------------------------------------------

_GL_NODES = {k: np.polynomial.legendre.leggauss(k) for k in (10, 21)}


def _gl(f, a, b, k):
    x, w = _GL_NODES[k]
    half = 0.5 * (b - a)
    return half * float(w @ f(half * x + 0.5 * (a + b)))


def _adaptive_gl(f, a, b, rtol, atol, depth=0, whole=None):
    coarse = _gl(f, a, b, 10)
    fine = _gl(f, a, b, 21)
    scale = abs(fine) if whole is None else max(abs(fine), abs(whole))
    if abs(fine - coarse) <= max(rtol * scale, atol) or depth >= 40:
        return fine
    mid = 0.5 * (a + b)
    return (_adaptive_gl(f, a, mid, rtol, atol, depth + 1, whole)
            + _adaptive_gl(f, mid, b, rtol, atol, depth + 1, whole))


def _sin_power_integral(n, theta, rtol=1e-13):
    p = n - 2
    if p == 0:
        return float(theta)
    f = lambda t: np.sin(t) ** p  # noqa: E731
    return _adaptive_gl(f, 0.0, float(theta), rtol, 0.0)


def cap_measure(n, theta):
    """Normalized surface measure of a cap of angular radius ``theta`` on S^{n-1}.

    Computed by adaptive Gauss-Legendre quadrature of sin^{n-2}.
    """
    if n < 2:
        raise DimensionError("cap_measure needs n >= 2")
    theta = angle(theta)
    if theta == 0.0:
        return 0.0
    if theta == math.pi:
        return 1.0
    # Integrate the shorter side; this keeps Omega(theta) + Omega(pi - theta) = 1
    # to round-off and preserves relative accuracy in small caps.
    total = _sin_power_integral(n, math.pi / 2)
    if theta <= math.pi / 2:
        return 0.5 * _sin_power_integral(n, theta) / total
    return 1.0 - 0.5 * _sin_power_integral(n, math.pi - theta) / total


def cap_measure_beta(n, theta):
    """Cross-check of :func:`cap_measure` via the regularized incomplete beta."""
    from scipy.special import betainc

    theta = angle(theta)
    if theta <= math.pi / 2:
        return 0.5 * float(betainc((n - 1) / 2.0, 0.5, math.sin(theta) ** 2))
    return 1.0 - 0.5 * float(betainc((n - 1) / 2.0, 0.5, math.sin(theta) ** 2))


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------

def sample_uniform(n, rng, size=None):
    """Uniform point(s) on S^{n-1} from normalized Gaussian vectors."""
    if n < 2:
        raise DimensionError("sample_uniform needs n >= 2")
    m = 1 if size is None else int(size)
    g = rng.standard_normal((m, n))
    norms = np.linalg.norm(g, axis=1)
    bad = norms == 0.0
    while bad.any():
        g[bad] = rng.standard_normal((int(bad.sum()), n))
        norms = np.linalg.norm(g, axis=1)
        bad = norms == 0.0
    out = g / norms[:, None]
    return out[0] if size is None else out


def ring_geodesic_radius(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha <= math.pi / 6 + _CLAMP_TOL:
        raise ValueError(f"alpha must lie in (0, pi/6], got {alpha}")
    return math.pi - 2.0 * alpha


def sample_ring(x, alpha, rng, size=None):
    """Point(s) y on S^{n-1} with ||x - y|| = 2 cos(alpha)."""
    rho = ring_geodesic_radius(alpha)
    x = np.asarray(x, dtype=np.float64)
    m = 1 if size is None else int(size)
    out = np.empty((m, x.shape[0]))
    filled = 0
    while filled < m:
        g = rng.standard_normal((m - filled, x.shape[0]))
        g -= np.outer(g @ x, x)
        norms = np.linalg.norm(g, axis=1)
        ok = norms > 1e-12
        u = g[ok] / norms[ok, None]
        out[filled:filled + u.shape[0]] = math.cos(rho) * x + math.sin(rho) * u
        filled += u.shape[0]
    out /= np.linalg.norm(out, axis=1)[:, None]
    return out[0] if size is None else out


# --------------------------------------------------------------------------
# enclosing caps
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EnclosingCap:
    center: np.ndarray
    radius: float
    support: list = field(default_factory=list)
    exact: bool = True

    def as_cap(self):
        return SphericalCap(self.center, self.radius)


def min_enclosing_cap(points):
    """Smallest spherical cap containing every row of ``points``.

    Solved through the ambient minimum enclosing ball, whose center
    direction is the cap center whenever the optimal radius is below pi/2.
    Raises DegenerateCenterError if that ball is centered at the origin.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.shape[0] == 0:
        raise ValueError("min_enclosing_cap needs at least one point")
    center, _, support = min_enclosing_ball(pts)
    norm = np.linalg.norm(center)
    if norm < 1e-12:
        raise DegenerateCenterError("degenerate center: enclosing ball centered at the origin")
    c = center / norm
    radius = float(np.max(angles_between(pts, c)))
    return EnclosingCap(c, radius, support)


def min_enclosing_cap_search(points, rng=None, samples=20000):
    """Enclosing cap that also handles the degenerate-center case.

    If the ambient ball is centered at the origin, the optimum radius is at
    least pi/2. When the points span a proper subspace, any unit normal to it
    attains exactly pi/2. Otherwise the radius exceeds pi/2 and is found by a
    sampled search with local refinement (``exact=False`` on the result).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    try:
        return min_enclosing_cap(pts)
    except DegenerateCenterError:
        pass
    n = pts.shape[1]
    _, s, vt = np.linalg.svd(pts, full_matrices=True)
    rank = int(np.sum(s > 1e-10 * max(s[0], 1.0)))
    if rank < n:
        c = vt[rank]
        radius = float(np.max(angles_between(pts, c)))
        return EnclosingCap(c, radius, list(range(pts.shape[0])))

    from scipy.optimize import minimize

    if rng is None:
        rng = np.random.default_rng(0)
    cand = sample_uniform(n, rng, samples)
    worst = np.min(cand @ pts.T, axis=1)
    c0 = cand[int(np.argmax(worst))]

    def objective(v):
        v = v / np.linalg.norm(v)
        return -float(np.min(pts @ v))

    res = minimize(objective, c0, method="Nelder-Mead",
                   options=dict(xatol=1e-12, fatol=1e-14, maxiter=20000))
    c = res.x / np.linalg.norm(res.x)
    if objective(c) > objective(c0):
        c = c0
    radius = float(np.max(angles_between(pts, c)))
    return EnclosingCap(c, radius, [], exact=False)
