"""Witness sets W(X) and the illumination-cone predicate."""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from . import _kernels
from .sphere import (
    ANGLE_TOL,
    SphericalCap,
    angles_between,
    ring_geodesic_radius,
    sample_ring,
)
from .streams import stream


class HypothesisError(ValueError):
    """Apex set violates the separation needed for the diameter bound."""


def _check_alpha(alpha):
    ring_geodesic_radius(alpha)


def _pair_angles(points):
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.shape[0] < 2:
        return np.empty(0)
    iu, ju = np.triu_indices(pts.shape[0], k=1)
    dots = np.einsum("ij,ij->i", pts[iu], pts[ju])
    return np.arccos(np.clip(dots, -1.0, 1.0))


def check_lemma3_i(points, alpha):
    """All pairwise angles at most pi - 2 alpha (so diameter <= 2 cos alpha)."""
    _check_alpha(alpha)
    theta = _pair_angles(points)
    ok = bool(np.all(theta <= math.pi - 2 * alpha + ANGLE_TOL))
    if ok:
        assert diameter(points) <= 2 * math.cos(alpha) + ANGLE_TOL
    return ok


def check_lemma3_ii(points, alpha):
    """All pairwise angles inside [4 alpha, pi - 6 alpha].

    For alpha > pi/10 the window is empty and only singletons pass.
    """
    _check_alpha(alpha)
    if alpha > math.pi / 10:
        warnings.warn("alpha > pi/10: separation window is empty for two or more points",
                      stacklevel=2)
    theta = _pair_angles(points)
    return bool(np.all((theta >= 4 * alpha - ANGLE_TOL) & (theta <= math.pi - 6 * alpha + ANGLE_TOL)))


@dataclass
class WitnessSet:
    alpha: float
    apexes: np.ndarray           # (k, n)
    ring_samples: np.ndarray     # (k, s, n)
    samples_per_ring: int
    seed: int = 0
    hypothesis_held: bool = True

    def all_points(self):
        n = self.apexes.shape[1]
        return np.vstack([self.apexes, self.ring_samples.reshape(-1, n)])


def default_samples_per_ring(n):
    return max(64, 2 * n)


def build_witness(points, alpha, samples_per_ring=None, seed=0, override=False):
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n = pts.shape[1]
    if samples_per_ring is None:
        samples_per_ring = default_samples_per_ring(n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        held = check_lemma3_ii(pts, alpha)
    if not held and not override:
        raise HypothesisError(
            f"apexes need pairwise angles in [4a, pi - 6a] for a = {alpha:.6g}")
    rings = np.empty((pts.shape[0], samples_per_ring, n))
    for k, x in enumerate(pts):
        if samples_per_ring:
            rings[k] = sample_ring(x, alpha, stream(seed, 1, k), samples_per_ring)
    return WitnessSet(float(alpha), pts.copy(), rings, int(samples_per_ring), int(seed), held)


def diameter(points):
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.shape[0] == 0:
        raise ValueError("diameter of an empty set")
    return math.sqrt(_kernels.max_sqdist(pts))


def witness_diameter(w):
    return diameter(w.all_points())


@dataclass(frozen=True)
class ConeConstraint:
    apex: np.ndarray
    cone: SphericalCap


def illumination_cone(x, alpha):
    """Directions that can illuminate apex ``x``: the cap C(-x, pi/2 - alpha)."""
    _check_alpha(alpha)
    x = np.asarray(x, dtype=np.float64)
    return ConeConstraint(x, SphericalCap(-x, math.pi / 2 - alpha))


def illuminable_set(xi, w):
    """Indices i with xi in C(-x_i, pi/2 - alpha)."""
    xi = np.asarray(xi, dtype=np.float64)
    theta = angles_between(-w.apexes, xi)
    return {int(i) for i in np.flatnonzero(theta <= math.pi / 2 - w.alpha + 1e-12)}


def default_t_grid():
    return np.logspace(-6, math.log10(4.0), 64)


def plane_ring_points(x, xi, alpha):
    """The two points of R(x, alpha) in the plane through 0, x and xi."""
    x = np.asarray(x, dtype=np.float64)
    xi = np.asarray(xi, dtype=np.float64)
    perp = xi - (xi @ x) * x
    norm = np.linalg.norm(perp)
    if norm < 1e-12:
        raise ValueError("plane undefined: xi is parallel to x")
    e2 = perp / norm
    rho = ring_geodesic_radius(alpha)
    base = math.cos(rho) * x
    return base + math.sin(rho) * e2, base - math.sin(rho) * e2


def verify_cone_necessity(x, xi, alpha, t_grid=None):
    """Check that the half-line x + t xi leaves the ball of radius 2 cos(alpha) about a ring point.

    Applies when xi lies strictly outside C(-x, pi/2 - alpha). Returns
    ``(ok, y)`` where ``y`` is the ring point used.
    """
    x = np.asarray(x, dtype=np.float64)
    xi = np.asarray(xi, dtype=np.float64)
    theta = math.acos(min(1.0, max(-1.0, float(-x @ xi))))
    if theta <= math.pi / 2 - alpha + 1e-6:
        raise ValueError("xi lies in the illumination cone; the check does not apply")
    y1, y2 = plane_ring_points(x, xi, alpha)
    # the ring point on the far side of -x from xi makes an obtuse angle with xi
    y = y1 if (y1 - x) @ xi < (y2 - x) @ xi else y2
    if t_grid is None:
        t_grid = default_t_grid()
    t = np.asarray(t_grid, dtype=np.float64)
    dist = np.linalg.norm(x[None, :] + t[:, None] * xi[None, :] - y[None, :], axis=1)
    return bool(np.all(dist > 2 * math.cos(alpha))), y
