"""Hot inner loops, compiled with numba when available.

Every kernel has a pure-numpy twin with the same signature and the same
output. Set ``CAPCERT_DISABLE_NUMBA=1`` before import to force the numpy
path (useful for debugging and for the benchmark comparison).
"""

import os

import numpy as np

_DISABLED = os.environ.get("CAPCERT_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def _opts():
    return dict(cache=True, nogil=True, fastmath=False, error_model="numpy")


# --------------------------------------------------------------------------
# numpy reference implementations
# --------------------------------------------------------------------------

def bad_pairs_np(points, cos_lo, cos_hi):
    """Pairs (i<j) whose inner product lies outside [cos_hi, cos_lo].

    Returns an (m, 3) int64 array of rows (i, j, kind) where kind is 0 for
    too-close (dot > cos_lo) and 1 for too-antipodal (dot < cos_hi).
    """
    gram = points @ points.T
    iu, ju = np.triu_indices(points.shape[0], k=1)
    dots = gram[iu, ju]
    close = dots > cos_lo
    anti = dots < cos_hi
    keep = close | anti
    out = np.empty((int(keep.sum()), 3), dtype=np.int64)
    out[:, 0] = iu[keep]
    out[:, 1] = ju[keep]
    out[:, 2] = anti[keep].astype(np.int64)
    return out


def greedy_cover_delete_np(n, pairs):
    """Delete max-degree vertices until no pair has both endpoints alive.

    Ties go to the lowest index. Returns a boolean keep-mask of length n.
    """
    adj = np.zeros((n, n), dtype=np.bool_)
    adj[pairs[:, 0], pairs[:, 1]] = True
    adj[pairs[:, 1], pairs[:, 0]] = True
    deg = adj.sum(axis=1).astype(np.int64)
    keep = np.ones(n, dtype=np.bool_)
    while True:
        k = int(np.argmax(deg))
        if deg[k] == 0:
            break
        keep[k] = False
        deg -= adj[k]
        deg[k] = 0
        adj[k, :] = False
        adj[:, k] = False
    return keep


def cap_depth_np(samples, centers, cos_r):
    """Number of caps C(center, r) containing each sample row."""
    return (samples @ centers.T >= cos_r).sum(axis=1).astype(np.int64)


def max_sqdist_np(points):
    """Largest squared pairwise Euclidean distance."""
    if points.shape[0] < 2:
        return 0.0
    sq = np.einsum("ij,ij->i", points, points)
    best = 0.0
    # row blocks keep memory at O(block * m)
    block = 512
    for s in range(0, points.shape[0], block):
        chunk = points[s:s + block]
        d2 = sq[s:s + block, None] + sq[None, :] - 2.0 * chunk @ points.T
        # recompute the winner exactly to avoid cancellation in the expansion
        i, j = np.unravel_index(int(np.argmax(d2)), d2.shape)
        diff = chunk[i] - points[j]
        best = max(best, float(diff @ diff))
    return best


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(**_opts())
    def _bad_pairs_nb(points, cos_lo, cos_hi):
        m, d = points.shape
        cap = 1024
        out = np.empty((cap, 3), dtype=np.int64)
        k = 0
        for i in range(m):
            for j in range(i + 1, m):
                s = 0.0
                for t in range(d):
                    s += points[i, t] * points[j, t]
                kind = -1
                if s > cos_lo:
                    kind = 0
                elif s < cos_hi:
                    kind = 1
                if kind >= 0:
                    if k == cap:
                        cap *= 2
                        grown = np.empty((cap, 3), dtype=np.int64)
                        grown[:k] = out[:k]
                        out = grown
                    out[k, 0] = i
                    out[k, 1] = j
                    out[k, 2] = kind
                    k += 1
        return out[:k].copy()

    @njit(**_opts())
    def _greedy_cover_delete_nb(n, pairs):
        adj = np.zeros((n, n), dtype=np.bool_)
        for r in range(pairs.shape[0]):
            adj[pairs[r, 0], pairs[r, 1]] = True
            adj[pairs[r, 1], pairs[r, 0]] = True
        deg = np.zeros(n, dtype=np.int64)
        for i in range(n):
            for j in range(n):
                if adj[i, j]:
                    deg[i] += 1
        keep = np.ones(n, dtype=np.bool_)
        while True:
            k = 0
            for i in range(1, n):
                if deg[i] > deg[k]:
                    k = i
            if deg[k] == 0:
                break
            keep[k] = False
            for j in range(n):
                if adj[k, j]:
                    deg[j] -= 1
                    adj[k, j] = False
                    adj[j, k] = False
            deg[k] = 0
        return keep

    @njit(**_opts())
    def _cap_depth_nb(samples, centers, cos_r):
        m, d = samples.shape
        out = np.zeros(m, dtype=np.int64)
        for s in range(m):
            c = 0
            for i in range(centers.shape[0]):
                acc = 0.0
                for t in range(d):
                    acc += samples[s, t] * centers[i, t]
                if acc >= cos_r:
                    c += 1
            out[s] = c
        return out

    @njit(**_opts())
    def _max_sqdist_nb(points):
        m, d = points.shape
        best = 0.0
        for i in range(m):
            for j in range(i + 1, m):
                s = 0.0
                for t in range(d):
                    diff = points[i, t] - points[j, t]
                    s += diff * diff
                if s > best:
                    best = s
        return best

    def bad_pairs(points, cos_lo, cos_hi):
        return _bad_pairs_nb(np.ascontiguousarray(points, dtype=np.float64), float(cos_lo), float(cos_hi))

    def greedy_cover_delete(n, pairs):
        pairs = np.ascontiguousarray(pairs, dtype=np.int64).reshape(-1, 3)
        return _greedy_cover_delete_nb(int(n), pairs)

    def cap_depth(samples, centers, cos_r):
        return _cap_depth_nb(
            np.ascontiguousarray(samples, dtype=np.float64),
            np.ascontiguousarray(centers, dtype=np.float64),
            float(cos_r),
        )

    def max_sqdist(points):
        return float(_max_sqdist_nb(np.ascontiguousarray(points, dtype=np.float64)))

else:
    bad_pairs = bad_pairs_np
    greedy_cover_delete = greedy_cover_delete_np
    cap_depth = cap_depth_np
    max_sqdist = max_sqdist_np


BACKEND = "numba" if HAS_NUMBA else "numpy"
