"""Randomized construction of separated point sets by the deletion method."""

from dataclasses import dataclass, field
import math

import numpy as np

from . import _kernels
from .sphere import cap_measure, sample_uniform
from .streams import stream

DEFAULT_N_CAP = 10**7
_BOUNDARY_TOL = 1e-12

TOO_CLOSE = "too-close"
TOO_ANTIPODAL = "too-antipodal"


class DeskScaleError(RuntimeError):
    """A requested size exceeds what the desk-scale tooling will attempt."""


@dataclass(frozen=True)
class ConstructionParams:
    dim: int
    psi: float
    phi: float
    seed: int = 0
    n_override: int | None = None

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if not 0.0 < self.psi < self.phi < math.pi / 2:
            raise ValueError(
                f"need 0 < psi < phi < pi/2, got psi={self.psi!r}, phi={self.phi!r}")
        if self.n_override is not None and self.n_override < 1:
            raise ValueError("n_override must be a positive integer")


@dataclass
class BadPairSet:
    pairs: np.ndarray  # (m, 2) int64, i < j
    kinds: list = field(default_factory=list)

    def __len__(self):
        return self.pairs.shape[0]


@dataclass
class Configuration:
    params: ConstructionParams
    points: np.ndarray
    candidate_count: int
    deleted_count: int
    kept_indices: np.ndarray | None = None

    def __len__(self):
        return self.points.shape[0]

    @property
    def markov_success(self):
        """Whether at least half of the candidates survived deletion."""
        return 2 * len(self) >= self.candidate_count


def target_count(n, phi, cap=DEFAULT_N_CAP):
    """Candidate count ceil(8 n ln n / Omega_n((1 - 1/(2n)) phi))."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 < phi < math.pi / 2:
        raise ValueError("phi must lie in (0, pi/2)")
    omega = cap_measure(n, (1.0 - 1.0 / (2 * n)) * phi)
    value = 8.0 * n * math.log(n) / omega
    if not math.isfinite(value) or value > cap:
        raise DeskScaleError(
            f"N too large for desk scale (N ~ {value:.3g} > {cap}); pass n_override")
    return math.ceil(value)


def sample_candidates(params, cap=DEFAULT_N_CAP):
    count = params.n_override or target_count(params.dim, params.phi, cap)
    return sample_uniform(params.dim, stream(params.seed, 0), count)


def find_bad_pairs(points, psi):
    """Exhaustive scan for pairs with angle outside [psi, pi - psi].

    Boundary pairs count as good: a pair is flagged only if its angle is below
    ``psi - 1e-12`` or above ``pi - psi + 1e-12``.
    """
    if not psi < math.pi / 2:
        raise ValueError("psi must be < pi/2")
    return _scan(points, psi)


def _scan(points, psi):
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    cos_lo = math.cos(max(psi - _BOUNDARY_TOL, 0.0))
    cos_hi = math.cos(min(math.pi - psi + _BOUNDARY_TOL, math.pi))
    raw = _kernels.bad_pairs(pts, cos_lo, cos_hi)
    # the kernels threshold inner products; confirm marginal calls by angle
    if raw.shape[0]:
        dots = np.einsum("ij,ij->i", pts[raw[:, 0]], pts[raw[:, 1]])
        theta = np.arccos(np.clip(dots, -1.0, 1.0))
        real = (theta < psi - _BOUNDARY_TOL) | (theta > math.pi - psi + _BOUNDARY_TOL)
        raw = raw[real]
    order = np.lexsort((raw[:, 1], raw[:, 0]))
    raw = raw[order]
    kinds = [TOO_ANTIPODAL if k else TOO_CLOSE for k in raw[:, 2]]
    return BadPairSet(raw[:, :2].copy(), kinds)


def delete_bad(points, bad, params=None):
    """Remove a vertex cover of the bad pairs, greedily by remaining degree."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    m = pts.shape[0]
    pairs = np.zeros((len(bad), 3), dtype=np.int64)
    pairs[:, :2] = bad.pairs
    keep = _kernels.greedy_cover_delete(m, pairs)
    kept = np.flatnonzero(keep)
    return Configuration(params, pts[kept], m, m - kept.size, kept)


def verify_separation(points, psi):
    """Return ``(ok, violations)`` with violations as ``(i, j, angle)`` triples."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    bad = _scan(pts, psi)
    violations = []
    for i, j in bad.pairs:
        theta = math.acos(min(1.0, max(-1.0, float(pts[i] @ pts[j]))))
        violations.append((int(i), int(j), theta))
    return not violations, violations


def construct_separated(params, cap=DEFAULT_N_CAP):
    points = sample_candidates(params, cap)
    bad = find_bad_pairs(points, params.psi)
    config = delete_bad(points, bad, params)
    ok, violations = verify_separation(config.points, params.psi)
    if not ok:  # pragma: no cover - deletion guarantees separation
        raise AssertionError(f"separation violated after deletion: {violations[:3]}")
    return config
