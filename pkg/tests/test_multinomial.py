import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bregc import average_divergence, bregman_divergence, geodesic_point
from bregc.errors import DomainError, ShapeError
from bregc.generators import make_multinomial
from bregc.multinomial import (check_histogram, discrete_kl, histogram_centroid,
                               histogram_skl_centroid, histogram_to_natural, natural_to_histogram,
                               smooth_histogram)

# the lambda = 1/2 point is visibly worse than the walk's answer on this pair
MIDPOINT_GAP_PAIR = [np.array([0.9, 0.1]), np.array([0.001, 0.999])]
# the middle bin of the symmetrized centroid rises above both inputs
RAISED_BIN_PAIR = [np.array([0.98, 0.01, 0.01]), np.array([0.01, 0.01, 0.98])]


def test_smoothing_examples():
    np.testing.assert_allclose(smooth_histogram([1, 1, 1, 1], 0.3), [0.25] * 4, atol=1e-15)
    np.testing.assert_allclose(smooth_histogram([0, 1], 0.01), [0.005 / 1.01, 1.005 / 1.01], atol=1e-15)
    with pytest.raises(ValueError):
        smooth_histogram([0, 0, 0])
    with pytest.raises(ValueError):
        smooth_histogram([1, 2], 0.0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 10_000), min_size=2, max_size=40).filter(lambda c: sum(c) > 0))
def test_smoothed_counts_are_histograms(counts):
    h = smooth_histogram(counts)
    check_histogram(h)
    assert np.all(h > 0)


def test_check_histogram():
    with pytest.raises(DomainError):
        check_histogram([0.5, 0.5, 0.0])
    with pytest.raises(DomainError):
        check_histogram([0.5, 0.6])


def test_natural_conversions():
    np.testing.assert_allclose(histogram_to_natural([1 / 3] * 3), [0, 0], atol=1e-15)
    theta = histogram_to_natural([0.2, 0.3, 0.5])
    np.testing.assert_allclose(theta, [math.log(0.4), math.log(0.6)], atol=1e-15)
    np.testing.assert_allclose(theta, [-0.9162907, -0.5108256], atol=1e-7)
    np.testing.assert_allclose(natural_to_histogram([0.0, 0.0]), [1 / 3] * 3, atol=1e-15)
    np.testing.assert_allclose(natural_to_histogram([-0.9162907, -0.5108256]), [0.2, 0.3, 0.5], atol=1e-7)


def test_natural_to_histogram_extreme():
    with np.errstate(over="raise", invalid="raise"):
        q = natural_to_histogram([700.0, 0.0])
    # oracle: exp(theta - logsumexp) with python's arbitrary-precision-safe math
    expected = [1.0, math.exp(-700.0), math.exp(-700.0)]
    assert np.all(np.isfinite(q)) and np.all(q > 0)
    assert math.fsum(q) == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(q, expected, rtol=1e-12)


def test_bijection(rng):
    for d in (2, 3, 10, 64):
        for _ in range(30):
            q = rng.dirichlet(np.ones(d))
            np.testing.assert_allclose(natural_to_histogram(histogram_to_natural(q)), q, atol=1e-12, rtol=0)
            theta = rng.normal(size=d - 1) * 3
            np.testing.assert_allclose(histogram_to_natural(natural_to_histogram(theta)), theta,
                                       atol=1e-10, rtol=0)


def test_discrete_kl_examples():
    assert discrete_kl([0.3, 0.7], [0.3, 0.7]) == 0.0
    expected = 0.5 * math.log(2) + 0.5 * math.log(2 / 3)
    assert discrete_kl([0.5, 0.5], [0.25, 0.75]) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.1438410, abs=1e-7)
    with pytest.raises(ShapeError):
        discrete_kl([0.5, 0.5], [0.2, 0.3, 0.5])


@pytest.mark.parametrize("d", [2, 3, 5, 8, 16, 33, 64])
def test_discrete_kl_is_swapped_bregman(d, rng):
    gen = make_multinomial(d)
    for _ in range(50):
        p, q = rng.dirichlet(np.ones(d)), rng.dirichlet(np.ones(d))
        kl = discrete_kl(p, q)
        breg = bregman_divergence(gen, histogram_to_natural(q), histogram_to_natural(p))
        assert abs(kl - breg) <= 1e-12 * (1 + kl)


# -- centroids ---------------------------------------------------------------------

def test_single_histogram():
    q = np.array([0.2, 0.3, 0.5])
    c = histogram_skl_centroid([q])
    np.testing.assert_allclose(c.histogram, q, atol=1e-12)


def test_identical_histograms():
    q = np.array([0.2, 0.3, 0.5])
    c = histogram_skl_centroid([q, q])
    np.testing.assert_allclose(c.histogram, q, atol=1e-12)
    assert c.result.lambda_star == 0.0 and c.result.iterations == 0


def test_sided_histograms_are_arithmetic_and_geometric(rng):
    hs = rng.dirichlet(np.ones(4), size=3)
    w = rng.dirichlet(np.ones(3))
    c = histogram_centroid(list(hs), weights=w)
    np.testing.assert_allclose(c.arithmetic, w @ hs, atol=1e-12)
    g = np.exp(w @ np.log(hs))
    np.testing.assert_allclose(c.geometric, g / g.sum(), atol=1e-12)
    right = histogram_centroid(list(hs), side="right", weights=w).histogram
    left = histogram_centroid(list(hs), side="left", weights=w).histogram
    np.testing.assert_allclose(right, c.arithmetic, atol=1e-12)
    np.testing.assert_allclose(left, c.geometric, atol=1e-12)


def test_sided_histograms_minimise_kl(rng):
    hs = rng.dirichlet(np.ones(3), size=4)
    right = histogram_centroid(list(hs), side="right").histogram
    left = histogram_centroid(list(hs), side="left").histogram
    for _ in range(200):
        probe = rng.dirichlet(np.ones(3) * 5)
        assert sum(discrete_kl(h, right) for h in hs) <= sum(discrete_kl(h, probe) for h in hs) + 1e-12
        assert sum(discrete_kl(left, h) for h in hs) <= sum(discrete_kl(probe, h) for h in hs) + 1e-12


def test_skl_centroid_beats_grid_probes():
    hs = [np.array([0.5, 0.5]), np.array([0.1, 0.9])]
    c = histogram_skl_centroid(hs)
    gen = make_multinomial(2)
    pts = np.array([histogram_to_natural(h) for h in hs])
    assert abs(c.result.bisector_gap) <= 1e-10 * (1 + bregman_divergence(gen, c.natural_right, c.natural_left))
    for lam in np.linspace(0, 1, 1000):
        q = geodesic_point(gen, c.natural_right, c.natural_left, float(lam))
        assert c.result.symmetrized_average <= average_divergence(gen, pts, q, "sym")


def test_skl_radius_is_mean_symmetrized_kl():
    c = histogram_skl_centroid(MIDPOINT_GAP_PAIR)
    direct = np.mean([0.5 * (discrete_kl(h, c.histogram) + discrete_kl(c.histogram, h))
                      for h in MIDPOINT_GAP_PAIR])
    assert c.result.symmetrized_average == pytest.approx(direct, rel=1e-10)


def test_midpoint_is_not_the_centroid():
    c = histogram_skl_centroid(MIDPOINT_GAP_PAIR)
    gen = make_multinomial(2)
    pts = np.array([histogram_to_natural(h) for h in MIDPOINT_GAP_PAIR])
    mid = geodesic_point(gen, c.natural_right, c.natural_left, 0.5)
    mid_radius = average_divergence(gen, pts, mid, "sym")
    assert (mid_radius - c.result.symmetrized_average) / c.result.symmetrized_average > 1e-3


def test_centroid_between_sided_in_natural_coordinates(rng):
    for _ in range(50):
        hs = list(rng.dirichlet(np.ones(5) * 0.5, size=3))
        c = histogram_skl_centroid(hs)
        lo = np.minimum(c.natural_right, c.natural_left)
        hi = np.maximum(c.natural_right, c.natural_left)
        assert np.all(c.result.centroid >= lo - 1e-12) and np.all(c.result.centroid <= hi + 1e-12)


def test_centroid_bin_may_exceed_both_inputs():
    c = histogram_skl_centroid(RAISED_BIN_PAIR)
    assert c.histogram[1] > max(h[1] for h in RAISED_BIN_PAIR)
    # never in natural coordinates
    thetas = np.array([histogram_to_natural(h) for h in RAISED_BIN_PAIR])
    assert np.all(c.result.centroid <= thetas.max(axis=0) + 1e-12)
    assert np.all(c.result.centroid >= thetas.min(axis=0) - 1e-12)


def test_centroid_rejects_bad_input():
    with pytest.raises(ValueError):
        histogram_centroid([])
    with pytest.raises(ShapeError):
        histogram_centroid([[0.5, 0.5], [0.2, 0.3, 0.5]])
    with pytest.raises(ValueError):
        histogram_centroid([[0.5, 0.5]], side="middle")
