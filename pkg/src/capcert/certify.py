"""Lower-bound certificates: cap multiplicity, direction covers, ball covers."""

from dataclasses import dataclass, field, asdict
import math

import numpy as np

from . import _kernels
from .construct import DeskScaleError
from .miniball import min_enclosing_ball
from .setcover import exact_cover, greedy_cover
from .sphere import (
    DegenerateCenterError,
    angles_between,
    min_enclosing_cap,
    min_enclosing_cap_search,
    sample_uniform,
)
from .streams import stream

_CAP_TOL = 1e-9
_BALL_TOL = 1e-9
MC_BATCH = 1 << 16

__all__ = [
    "CoverCertificate",
    "MultiplicityReport",
    "ball_cover_number",
    "exact_direction_cover",
    "greedy_direction_cover",
    "illumination_lower_bound",
    "min_enclosing_ball",
    "multiplicity_exact",
    "multiplicity_mc",
]


@dataclass
class MultiplicityReport:
    family_size: int
    cap_radius: float
    mc_max: int
    mc_argmax: np.ndarray
    mc_samples: int
    exact_max: int | None = None
    exact_witness: np.ndarray | None = None


@dataclass
class CoverCertificate:
    universe_size: int
    lower_bound: int
    upper_bound: int
    lb_method: str
    ub_method: str
    parameters: dict = field(default_factory=dict)
    certified: bool = True
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower_bound > self.upper_bound:
            raise ValueError(f"lower bound {self.lower_bound} exceeds upper bound {self.upper_bound}")
        if self.lb_method == "exact" and self.lower_bound != self.upper_bound:
            raise ValueError("an exact certificate must have matching bounds")

    def to_dict(self):
        return asdict(self)


# --------------------------------------------------------------------------
# cap multiplicity
# --------------------------------------------------------------------------

def _depth_at(centers, radius, xi):
    return int(_kernels.cap_depth(xi[None, :], centers, math.cos(radius + 1e-12))[0])


def _hit_set(centers, radius, xi):
    return np.flatnonzero(angles_between(centers, xi) <= radius + 1e-12)


def multiplicity_mc(centers, radius, samples, rng):
    """Monte Carlo lower bound on the deepest point of a cap family.

    ``centers`` is an (k, n) array; every cap has angular ``radius``.
    """
    c = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    k, n = c.shape
    if k == 0:
        raise ValueError("empty cap family")
    cos_r = math.cos(radius + 1e-12)
    best, arg = -1, None
    done = 0
    while done < samples:
        m = min(MC_BATCH, samples - done)
        xs = sample_uniform(n, rng, m)
        depth = _kernels.cap_depth(xs, c, cos_r)
        j = int(np.argmax(depth))
        if depth[j] > best:
            best, arg = int(depth[j]), xs[j].copy()
        done += m
    # recenter on the smallest cap around the hit set
    hits = _hit_set(c, radius, arg)
    try:
        cap = min_enclosing_cap(c[hits])
        d = _depth_at(c, radius, cap.center)
        if d >= best:
            best, arg = d, cap.center
    except DegenerateCenterError:
        pass
    assert _depth_at(c, radius, arg) == best
    return MultiplicityReport(k, float(radius), best, arg, int(samples))


def subset_cap(points, radius, rng=None):
    """Return ``(feasible, cap)`` for whether ``points`` fit in a cap of ``radius``.

    Exact for radius < pi/2. For larger radii the degenerate full-rank case
    uses a sampled search and the returned cap has ``exact=False``.
    """
    try:
        cap = min_enclosing_cap(points)
    except DegenerateCenterError:
        if radius < math.pi / 2:
            return False, None
        cap = min_enclosing_cap_search(points, rng)
    return cap.radius <= radius + _CAP_TOL, cap


def _pairwise_ok(points, limit_angle=None, limit_dist=None):
    pts = np.atleast_2d(points)
    if limit_angle is not None:
        g = np.clip(pts @ pts.T, -1.0, 1.0)
        return np.arccos(g) <= limit_angle + _CAP_TOL
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    return d <= limit_dist + _BALL_TOL


class _Hereditary:
    """Enumerator over a hereditary family of index subsets.

    ``test(indices) -> (ok, witness)`` decides membership; ``contains(witness,
    j)`` says whether an existing witness already certifies adding ``j``.
    """

    def __init__(self, k, compat, test, contains):
        self.k = k
        self.compat = compat
        self.test = test
        self.contains = contains
        self.exact = True

    def extend(self, subset, witness, j):
        if witness is not None and self.contains(witness, j):
            return True, witness
        ok, w = self.test(subset + [j])
        if w is not None and not getattr(w, "exact", True):
            self.exact = False
        return ok, w

    def maximum(self, incumbent=0):
        """Largest member, by depth-first branch-and-bound."""
        # ``need`` is the size a subset must reach to be worth recording: the
        # incumbent itself until a witness of that size is found, then one more.
        best = {"need": max(incumbent, 1), "subset": None, "witness": None}
        order = sorted(range(self.k), key=lambda i: (-int(self.compat[i].sum()), i))

        def dfs(subset, witness, cands):
            if len(subset) >= best["need"]:
                best.update(need=len(subset) + 1, subset=list(subset), witness=witness)
            for pos, j in enumerate(cands):
                rest = cands[pos + 1:]
                if len(subset) + 1 + len(rest) < best["need"]:
                    return
                ok, w = self.extend(subset, witness, j)
                if not ok:
                    continue
                dfs(subset + [j], w, [r for r in rest if self.compat[j, r]])

        for pos, i in enumerate(order):
            rest = [r for r in order[pos + 1:] if self.compat[i, r]]
            if 1 + len(rest) < best["need"]:
                continue
            ok, w = self.test([i])
            if ok:
                dfs([i], w, rest)
        if best["subset"] is None:
            return 0, None, None
        return len(best["subset"]), best["subset"], best["witness"]

    def maximal_members(self):
        """All inclusion-maximal members as ``(bitmask, witness)`` pairs."""
        members = {}

        def dfs(subset, witness, mask, start):
            members[mask] = witness
            for j in range(start, self.k):
                if not all(self.compat[j, s] for s in subset):
                    continue
                ok, w = self.extend(subset, witness, j)
                if ok:
                    dfs(subset + [j], w, mask | (1 << j), j + 1)

        for i in range(self.k):
            ok, w = self.test([i])
            if ok:
                dfs([i], w, 1 << i, i + 1)
        out = []
        for mask, w in members.items():
            if all((mask >> j) & 1 or (mask | (1 << j)) not in members for j in range(self.k)):
                out.append((mask, w))
        out.sort(key=lambda t: t[0])
        return out


def _cap_family(centers, radius, rng=None):
    c = np.atleast_2d(np.asarray(centers, dtype=np.float64))

    def test(idx):
        return subset_cap(c[idx], radius, rng)

    def contains(cap, j):
        return float(np.arccos(np.clip(c[j] @ cap.center, -1.0, 1.0))) <= radius + _CAP_TOL

    compat = _pairwise_ok(c, limit_angle=2 * radius)
    return _Hereditary(c.shape[0], compat, test, contains)


def multiplicity_exact(centers, phi, limit=64, incumbent=0, rng=None):
    """Exact maximum number of caps C(c_i, phi) with a common point.

    Returns ``(count, witness_direction, subset, exact)``; ``exact`` is False
    only when phi >= pi/2 forced a sampled enclosing-cap search.
    """
    c = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if c.shape[0] > limit:
        raise DeskScaleError(f"family of {c.shape[0]} caps exceeds the exact limit {limit}")
    fam = _cap_family(c, phi, rng)
    count, subset, cap = fam.maximum(incumbent)
    if subset is None:
        # the incumbent overstated the optimum; search without it
        count, subset, cap = fam.maximum(0)
    return count, cap.center, sorted(subset), fam.exact


# --------------------------------------------------------------------------
# direction covers (illumination)
# --------------------------------------------------------------------------

def _cone_radius(alpha):
    return math.pi / 2 - alpha


def _covers(points, radius, xi):
    """Bitmask of the points whose reflected cap C(-x, radius) contains xi."""
    hits = np.flatnonzero(angles_between(-points, xi) <= radius + 1e-12)
    mask = 0
    for i in hits:
        mask |= 1 << int(i)
    return mask


def greedy_direction_cover(points, alpha, extra_candidates, rng):
    """Greedy upper bound on the number of directions illuminating every apex.

    Returns ``(count, directions)``.
    """
    x = np.atleast_2d(np.asarray(points, dtype=np.float64))
    m, n = x.shape
    radius = _cone_radius(alpha)
    pool = [-x[i] for i in range(m)]
    if extra_candidates:
        pool.extend(sample_uniform(n, rng, extra_candidates))
    masks = [_covers(x, radius, xi) for xi in pool]
    universe = (1 << m) - 1
    uncovered = universe
    chosen = []
    while uncovered:
        gains = [(mk & uncovered).bit_count() for mk in masks]
        b = int(np.argmax(gains))
        xi, mk = pool[b], masks[b]
        # grow the hit set one uncovered apex at a time while a common cap still fits
        hit = [i for i in range(m) if (mk >> i) & 1]
        for j in range(m):
            if (mk >> j) & 1 or not (uncovered >> j) & 1:
                continue
            try:
                cap = min_enclosing_cap(-x[hit + [j]])
            except DegenerateCenterError:
                continue
            if cap.radius > radius + 1e-12:
                continue
            alt = _covers(x, radius, cap.center)
            pool.append(cap.center)
            masks.append(alt)
            if (alt & uncovered).bit_count() > (mk & uncovered).bit_count():
                xi, mk = cap.center, alt
                hit = [i for i in range(m) if (mk >> i) & 1]
        chosen.append(xi)
        uncovered &= ~mk
    return len(chosen), np.array(chosen)


def exact_direction_cover(points, alpha, limit=24):
    """Minimum number of directions illuminating every apex, by exact set cover.

    Candidate directions are the enclosing-cap centers of every maximal set of
    apexes that one direction can serve, so the optimum is over the continuum.
    """
    x = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if x.shape[0] > limit:
        raise DeskScaleError(f"{x.shape[0]} apexes exceed the exact limit {limit}")
    fam = _cap_family(-x, _cone_radius(alpha))
    members = fam.maximal_members()
    masks = [mk for mk, _ in members]
    chosen = exact_cover((1 << x.shape[0]) - 1, masks)
    return len(chosen), np.array([members[i][1].center for i in chosen])


def illumination_lower_bound(points, alpha, mode="exact", limit=64, mc_samples=100_000,
                             extra_candidates=256, seed=0):
    """Certificate for the number of directions needed to illuminate the apexes.

    In exact mode the bound ceil(|X| / M) uses the exact multiplicity M of the
    reflected family C(-x_i, pi/2 - alpha). In mc mode M is only a lower bound
    on multiplicity, so the result is an estimate.
    """
    x = np.atleast_2d(np.asarray(points, dtype=np.float64))
    m = x.shape[0]
    radius = _cone_radius(alpha)
    mc = multiplicity_mc(-x, radius, mc_samples, stream(seed, 2))
    ub, _ = greedy_direction_cover(x, alpha, extra_candidates, stream(seed, 3))
    extras = {"mc_max": mc.mc_max, "mc_samples": mc.mc_samples, "cap_radius": radius}
    if mode == "exact":
        big_m, witness, subset, exact = multiplicity_exact(-x, radius, limit, incumbent=mc.mc_max)
        lb = math.ceil(m / big_m)
        extras.update(multiplicity=big_m, multiplicity_subset=subset,
                      multiplicity_witness=witness.tolist())
        certified = exact
    elif mode == "mc":
        big_m = mc.mc_max
        lb = min(math.ceil(m / big_m), ub)
        extras.update(multiplicity=big_m)
        certified = False
    else:
        raise ValueError(f"unknown mode {mode!r}")
    lb_method = "multiplicity"
    params = {"n": int(x.shape[1]), "alpha": float(alpha), "mode": mode, "seed": int(seed)}
    return CoverCertificate(m, lb, ub, lb_method, "greedy", params, certified, extras)


# --------------------------------------------------------------------------
# ball covers
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Ball:
    center: np.ndarray
    radius: float


def _ball_family(points, d):
    p = np.atleast_2d(np.asarray(points, dtype=np.float64))
    r = d / 2.0

    def test(idx):
        center, rad, _ = min_enclosing_ball(p[idx])
        return rad <= r * (1 + _BALL_TOL) + _BALL_TOL, _Ball(center, rad)

    def contains(ball, j):
        return float(np.linalg.norm(p[j] - ball.center)) <= r * (1 + _BALL_TOL) + _BALL_TOL

    compat = _pairwise_ok(p, limit_dist=d)
    return _Hereditary(p.shape[0], compat, test, contains)


def packing_bound(points, d):
    """Size of a greedily chosen subset with pairwise distances above ``d``."""
    p = np.atleast_2d(np.asarray(points, dtype=np.float64))
    chosen = []
    for i in range(p.shape[0]):
        if all(np.linalg.norm(p[i] - p[j]) > d + _BALL_TOL for j in chosen):
            chosen.append(i)
    return len(chosen)


def ball_cover_number(points, d, mode="exact", limit=24):
    """Certificate for the fewest closed balls of diameter ``d`` covering ``points``."""
    p = np.atleast_2d(np.asarray(points, dtype=np.float64))
    m = p.shape[0]
    if mode == "exact" and m > limit:
        raise DeskScaleError(f"{m} points exceed the exact ball-cover limit {limit}")
    if mode not in ("exact", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    fam = _ball_family(p, d)
    members = fam.maximal_members()
    masks = [mk for mk, _ in members]
    universe = (1 << m) - 1
    greedy = greedy_cover(universe, masks)
    pack = packing_bound(p, d)
    biggest = max(mk.bit_count() for mk in masks)
    mult = math.ceil(m / biggest)
    if mode == "exact":
        chosen = exact_cover(universe, masks, incumbent=greedy)
        lb = ub = len(chosen)
        lb_method, ub_method = "exact", "exact"
    else:
        chosen = greedy
        ub = len(chosen)
        lb, lb_method = (pack, "packing") if pack >= mult else (mult, "multiplicity")
        ub_method = "greedy"
    extras = {
        "packing_bound": pack,
        "multiplicity_bound": mult,
        "greedy_upper": len(greedy),
        "max_ball_load": biggest,
        "candidate_balls": len(masks),
        "centers": [members[i][1].center.tolist() for i in chosen],
        "assignments": [[j for j in range(m) if (masks[i] >> j) & 1] for i in chosen],
    }
    params = {"n": int(p.shape[1]), "d": float(d), "mode": mode}
    return CoverCertificate(m, lb, ub, lb_method, ub_method, params, True, extras)
