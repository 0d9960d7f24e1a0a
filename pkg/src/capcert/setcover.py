"""Set cover over bitmask families: greedy and exact branch-and-bound."""

import math


def greedy_cover(universe, masks):
    """Standard greedy cover; returns the list of chosen mask indices.

    Ties go to the lowest index. Raises ValueError if ``masks`` cannot cover
    ``universe``.
    """
    uncovered = universe
    chosen = []
    while uncovered:
        best, gain = -1, 0
        for i, m in enumerate(masks):
            g = (m & uncovered).bit_count()
            if g > gain:
                best, gain = i, g
        if best < 0:
            raise ValueError("family does not cover the universe")
        chosen.append(best)
        uncovered &= ~masks[best]
    return chosen


def _drop_dominated(masks):
    order = sorted(range(len(masks)), key=lambda i: (-masks[i].bit_count(), i))
    kept = []
    for i in order:
        m = masks[i]
        if m and not any((m | masks[k]) == masks[k] for k in kept):
            kept.append(i)
    return sorted(kept)


def exact_cover(universe, masks, incumbent=None):
    """Minimum number of masks whose union is ``universe``.

    Depth-first branch-and-bound: branch on the uncovered element with the
    fewest covering masks; bound by ceil(uncovered / best single gain).
    Returns the list of chosen mask indices.
    """
    if universe == 0:
        return []
    idx = _drop_dominated(masks)
    fam = [masks[i] for i in idx]
    nbits = universe.bit_length()
    covering = [[k for k, m in enumerate(fam) if (m >> e) & 1] for e in range(nbits)]
    for e in range(nbits):
        if (universe >> e) & 1 and not covering[e]:
            raise ValueError("family does not cover the universe")

    if incumbent is None:
        incumbent = greedy_cover(universe, fam)
    else:
        incumbent = [idx.index(i) if i in idx else None for i in incumbent]
        if None in incumbent:
            incumbent = greedy_cover(universe, fam)
    best = [list(incumbent)]

    def search(uncovered, chosen):
        if not uncovered:
            if len(chosen) < len(best[0]):
                best[0] = list(chosen)
            return
        gain = max((m & uncovered).bit_count() for m in fam)
        if len(chosen) + math.ceil(uncovered.bit_count() / gain) >= len(best[0]):
            return
        # element with the fewest options
        pick, options = None, None
        u = uncovered
        while u:
            low = u & -u
            e = low.bit_length() - 1
            opts = covering[e]
            if options is None or len(opts) < len(options):
                pick, options = e, opts
                if len(opts) == 1:
                    break
            u ^= low
        ranked = sorted(options, key=lambda k: (-(fam[k] & uncovered).bit_count(), k))
        for k in ranked:
            chosen.append(k)
            search(uncovered & ~fam[k], chosen)
            chosen.pop()

    search(universe, [])
    return sorted(idx[k] for k in best[0])
