import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from capcert.sphere import (
    DegenerateCenterError,
    DimensionError,
    SphericalCap,
    angle,
    angle_between,
    basis,
    cap_contains,
    cap_measure,
    cap_measure_beta,
    chord_from_angle,
    min_enclosing_cap,
    min_enclosing_cap_search,
    ring_geodesic_radius,
    sample_ring,
    sample_uniform,
    unit_vector,
)
from capcert.streams import stream

from oracles import grid_min_cap_radius

e1, e2, e3 = basis(3, 0), basis(3, 1), basis(3, 2)


def test_angle_between_basic():
    assert angle_between(e1, e1) == 0.0
    assert angle_between(e1, -e1) == pytest.approx(math.pi, abs=1e-15)
    assert angle_between(e1, e2) == pytest.approx(math.pi / 2, abs=1e-15)


def test_angle_between_dimension_mismatch():
    with pytest.raises(DimensionError):
        angle_between(e1, basis(4, 0))


def test_angle_validation():
    assert angle(math.pi + 1e-13) == math.pi
    assert angle(-1e-13) == 0.0
    with pytest.raises(ValueError):
        angle(math.pi + 1e-6)


def test_unit_vector_normalizes_and_rejects_n1():
    v = unit_vector([3.0, 4.0])
    assert abs(np.linalg.norm(v) - 1) <= 1e-12
    with pytest.raises(DimensionError):
        unit_vector([1.0])
    with pytest.raises(ValueError):
        unit_vector([0.0, 0.0])


def test_chord_from_angle():
    assert chord_from_angle(math.pi) == pytest.approx(2.0, abs=1e-15)
    assert chord_from_angle(2 * math.pi / 3) == pytest.approx(math.sqrt(3), abs=1e-15)
    assert chord_from_angle(0.0) == 0.0


def test_cap_contains():
    assert cap_contains(SphericalCap(e1, 0.3), e1)
    assert not cap_contains(SphericalCap(e1, math.pi / 4), -e1)
    assert cap_contains(SphericalCap(e1, math.pi / 2), e2)


def test_cap_radius_must_be_open_interval():
    with pytest.raises(ValueError):
        SphericalCap(e1, 0.0)
    with pytest.raises(ValueError):
        SphericalCap(e1, math.pi)


@pytest.mark.parametrize("n", [2, 3, 7, 40])
def test_cap_measure_fixed_points(n):
    assert cap_measure(n, math.pi / 2) == pytest.approx(0.5, abs=1e-14)
    assert cap_measure(n, math.pi) == 1.0
    assert cap_measure(n, 0.0) == 0.0


def test_cap_measure_n3_closed_form():
    for theta in np.linspace(0, math.pi, 37):
        assert abs(cap_measure(3, theta) - (1 - math.cos(theta)) / 2) <= 1e-12


def test_cap_measure_n2_is_linear():
    for theta in np.linspace(0, math.pi, 13):
        assert cap_measure(2, theta) == pytest.approx(theta / math.pi, abs=1e-14)


def test_cap_measure_rejects_n1():
    with pytest.raises(DimensionError):
        cap_measure(1, 0.5)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 60), st.floats(0.0, math.pi))
def test_cap_measure_matches_incomplete_beta(n, theta):
    a, b = cap_measure(n, theta), cap_measure_beta(n, theta)
    assert abs(a - b) <= 1e-10 * max(b, 1e-300) + 1e-15


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 50), st.floats(0.0, math.pi), st.floats(0.0, math.pi))
def test_cap_measure_monotone_and_symmetric(n, a, b):
    lo, hi = sorted((a, b))
    assert cap_measure(n, lo) <= cap_measure(n, hi) + 1e-15
    assert abs(cap_measure(n, a) + cap_measure(n, math.pi - a) - 1) <= 1e-10


def test_cap_measure_asymptotic_trend():
    phi = math.pi / 3
    gaps = [abs(cap_measure(n, phi) ** (1 / n) - math.sin(phi)) for n in (50, 100, 150, 200)]
    assert gaps[-1] <= 0.02
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_sample_uniform_unit_norm_and_deterministic():
    a = sample_uniform(5, stream(3), 100)
    b = sample_uniform(5, stream(3), 100)
    assert np.array_equal(a, b)
    assert np.all(np.abs(np.linalg.norm(a, axis=1) - 1) <= 1e-12)
    assert sample_uniform(2, stream(0)).shape == (2,)


def test_sample_uniform_mean_and_cap_fraction():
    xs = sample_uniform(3, stream(11), 10**5)
    assert np.all(np.abs(xs.mean(axis=0)) <= 0.02)
    frac = float(np.mean(xs @ e1 >= math.cos(math.pi / 3)))
    assert abs(frac - 0.25) <= 0.01


def test_ring_geodesic_radius():
    assert ring_geodesic_radius(math.pi / 6) == pytest.approx(2 * math.pi / 3, abs=1e-15)
    assert ring_geodesic_radius(math.pi / 14) == pytest.approx(6 * math.pi / 7, abs=1e-15)
    for a in (math.pi / 14, math.pi / 10, math.pi / 6):
        assert abs(chord_from_angle(ring_geodesic_radius(a)) - 2 * math.cos(a)) <= 1e-12
    with pytest.raises(ValueError):
        ring_geodesic_radius(math.pi / 5)
    with pytest.raises(ValueError):
        ring_geodesic_radius(0.0)


@pytest.mark.parametrize("n", [2, 3, 6])
@pytest.mark.parametrize("alpha", [math.pi / 14, math.pi / 10, math.pi / 6])
def test_sample_ring_geometry(n, alpha):
    rng = stream(5, n)
    x = sample_uniform(n, rng)
    ys = sample_ring(x, alpha, rng, 200)
    chord = np.linalg.norm(ys - x, axis=1)
    assert np.all(np.abs(chord - 2 * math.cos(alpha)) <= 1e-9)
    th = np.arccos(np.clip(ys @ x, -1, 1))
    assert np.all(np.abs(th - (math.pi - 2 * alpha)) <= 1e-9)
    th_neg = np.arccos(np.clip(ys @ -x, -1, 1))
    assert np.all(np.abs(th_neg - 2 * alpha) <= 1e-9)


def test_sample_ring_n2_hits_two_points():
    x = np.array([1.0, 0.0])
    ys = sample_ring(x, math.pi / 6, stream(1), 100)
    targets = [np.array([math.cos(t), math.sin(t)]) for t in (2 * math.pi / 3, -2 * math.pi / 3)]
    dist = np.min([np.linalg.norm(ys - t, axis=1) for t in targets], axis=0)
    assert np.all(dist <= 1e-9)
    # both points occur
    assert len({round(float(y[1]), 6) for y in ys}) == 2


def test_min_enclosing_cap_singleton_and_pair():
    cap = min_enclosing_cap([e1])
    assert np.allclose(cap.center, e1) and cap.radius == pytest.approx(0.0, abs=1e-12)
    theta = 1.1
    y = math.cos(theta) * e1 + math.sin(theta) * e2
    cap = min_enclosing_cap([e1, y])
    mid = unit_vector(e1 + y)
    assert np.allclose(cap.center, mid, atol=1e-12)
    assert cap.radius == pytest.approx(theta / 2, abs=1e-12)


def test_min_enclosing_cap_equator_is_degenerate_then_pole():
    pts = np.array([[math.cos(t), math.sin(t), 0.0] for t in (0, 2 * math.pi / 3, 4 * math.pi / 3)])
    with pytest.raises(DegenerateCenterError):
        min_enclosing_cap(pts)
    cap = min_enclosing_cap_search(pts)
    assert cap.radius == pytest.approx(math.pi / 2, abs=1e-12)
    assert abs(abs(cap.center[2]) - 1) <= 1e-12
    # grid oracle agrees
    r_grid, _ = grid_min_cap_radius(pts)
    assert abs(r_grid - math.pi / 2) <= 2e-3


def test_min_enclosing_cap_search_full_rank_degenerate():
    # tetrahedron: the optimal cap is wider than a hemisphere
    tet = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float) / math.sqrt(3)
    cap = min_enclosing_cap_search(tet, np.random.default_rng(0))
    assert not cap.exact
    r_grid, _ = grid_min_cap_radius(tet)
    assert cap.radius <= r_grid + 1e-9
    assert cap.radius > math.pi / 2


@pytest.mark.parametrize("seed", range(8))
def test_min_enclosing_cap_matches_grid(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, 7))
    base = sample_uniform(3, rng)
    pts = sample_uniform(3, rng, k) * 0.8 + base
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    cap = min_enclosing_cap(pts)
    assert np.all(np.arccos(np.clip(pts @ cap.center, -1, 1)) <= cap.radius + 1e-9)
    r_grid, _ = grid_min_cap_radius(pts)
    assert abs(cap.radius - r_grid) <= 2e-3
    assert cap.radius <= r_grid + 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_enclosing_cap_support_is_minimal(seed):
    rng = np.random.default_rng(100 + seed)
    pts = sample_uniform(4, rng, 9) + 1.5 * sample_uniform(4, rng)
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    cap = min_enclosing_cap(pts)
    assert 1 <= len(cap.support) <= 5
    for drop in cap.support:
        rest = [i for i in cap.support if i != drop]
        if rest:
            assert min_enclosing_cap(pts[rest]).radius < cap.radius - 1e-9


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 9))
def test_chord_geodesic_duality(seed, n):
    rng = stream(seed)
    x, y = sample_uniform(n, rng, 2)
    assert abs(np.linalg.norm(x - y) - chord_from_angle(angle_between(x, y))) <= 1e-9


def test_chord_geodesic_duality_bulk():
    rng = stream(99)
    x = sample_uniform(6, rng, 10**4)
    y = sample_uniform(6, rng, 10**4)
    theta = np.arccos(np.clip(np.einsum("ij,ij->i", x, y), -1, 1))
    assert np.all(np.abs(np.linalg.norm(x - y, axis=1) - 2 * np.sin(theta / 2)) <= 1e-9)
