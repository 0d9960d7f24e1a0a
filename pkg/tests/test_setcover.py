import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from capcert.setcover import exact_cover, greedy_cover


def brute(universe, masks):
    for k in range(len(masks) + 1):
        for combo in itertools.combinations(range(len(masks)), k):
            acc = 0
            for i in combo:
                acc |= masks[i]
            if acc & universe == universe:
                return k
    return None


def test_small_instances():
    assert exact_cover(0, [1]) == []
    assert len(exact_cover(0b111, [0b011, 0b110, 0b100])) == 2
    # greedy takes the big set first and needs 3; the optimum is 2
    masks = [0b111000, 0b110110 & 0b000111 | 0b001100, 0b000111, 0b111000 ^ 0b100000 | 0b000011]
    masks = [0b011110, 0b000111, 0b111000]
    assert len(greedy_cover(0b111111, masks)) == 3
    assert len(exact_cover(0b111111, masks)) == 2


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 10), st.lists(st.integers(1, 2**10 - 1), min_size=1, max_size=12))
def test_exact_matches_brute_force(nbits, raw):
    universe = (1 << nbits) - 1
    masks = [m & universe for m in raw] + [1 << i for i in range(nbits)]
    chosen = exact_cover(universe, masks)
    acc = 0
    for i in chosen:
        acc |= masks[i]
    assert acc == universe
    assert len(chosen) == brute(universe, masks)
    assert len(chosen) <= len(greedy_cover(universe, masks))


def test_uncoverable_raises():
    import pytest

    with pytest.raises(ValueError):
        exact_cover(0b11, [0b01])
    with pytest.raises(ValueError):
        greedy_cover(0b11, [0b01])
