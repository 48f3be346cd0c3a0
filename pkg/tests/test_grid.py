import math

import numpy as np
import pytest

from overlap_search import (
    CannotSplitError,
    GridAxis,
    GridRegion,
    enumerate_points,
    overlap_count,
    round_half_to_even,
    split,
    symmetric_partner,
)


# ---------------------------------------------------------------------------
# rounding and overlap counts
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "value,expected",
    [(3.5, 4), (2.5, 2), (7.5, 8), (4.5, 4), (3.2, 3), (3.8, 4), (-0.5, 0), (-1.5, -2)],
)
def test_round_half_to_even(value, expected):
    assert round_half_to_even(value) == expected


@pytest.mark.parametrize(
    "n,alpha,expected",
    [
        (8, 0.0, 4),
        (8, 0.2, 6),
        (10, 0.25, 8),   # round(7.5) ties to even
        (7, 0.0, 4),     # round(3.5) ties to even; odd n forces one overlap point
        (2, 0.0, 1),
        (5, 0.0, 3),     # round(2.5) -> 2 but ceil(5/2) = 3 wins
        (1, 0.0, 1),
    ],
)
def test_overlap_count_examples(n, alpha, expected):
    assert overlap_count(n, alpha) == expected


@pytest.mark.parametrize("alpha", [-0.01, 0.51, 1.0])
def test_overlap_count_rejects_bad_alpha(alpha):
    with pytest.raises(ValueError):
        overlap_count(8, alpha)


def test_overlap_count_rejects_bad_count():
    with pytest.raises(ValueError):
        overlap_count(0, 0.1)


def test_overlap_count_bounds_and_monotonicity():
    alphas = np.linspace(0.0, 0.5, 51)
    for n in range(1, 200):
        prev = 0
        for alpha in alphas:
            got = overlap_count(n, float(alpha))
            assert math.ceil(n / 2) <= got <= n
            assert got >= prev
            prev = got


# ---------------------------------------------------------------------------
# axes and regions
# ---------------------------------------------------------------------------

def test_axis_coordinate_formula():
    axis = GridAxis(origin=3, count=4, initial_count=16, initial_length=500.0)
    for i in range(4):
        assert axis.coordinate(i) == (2 * (3 + i) + 1) * 500.0 / 32
    assert np.allclose(axis.coordinates(), [axis.coordinate(i) for i in range(4)])


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(origin=0, count=0, initial_count=8, initial_length=500.0),
        dict(origin=-1, count=4, initial_count=8, initial_length=500.0),
        dict(origin=5, count=4, initial_count=8, initial_length=500.0),
        dict(origin=0, count=8, initial_count=8, initial_length=-1.0),
    ],
)
def test_axis_invariant_violations(kwargs):
    with pytest.raises(ValueError):
        GridAxis(**kwargs)


def test_enumerate_points_1d():
    region = GridRegion.initial_1d(8, 500.0)
    pts = enumerate_points(region)[:, 0]
    assert pts[0] == pytest.approx(31.25)
    assert pts[-1] == pytest.approx(468.75)

    region = GridRegion.initial_1d(4, 4.0)
    assert np.allclose(enumerate_points(region)[:, 0], [0.5, 1.5, 2.5, 3.5])


def test_enumerate_points_2d_row_major():
    region = GridRegion.initial_2d((2, 2), (2.0, 2.0))
    expected = [(0.5, 0.5), (0.5, 1.5), (1.5, 0.5), (1.5, 1.5)]
    assert np.allclose(enumerate_points(region), expected)
    assert region.num_points == 4


def test_region_contains_uses_cell_span():
    region = GridRegion.initial_1d(8, 500.0)
    assert region.contains([0.0])
    assert region.contains([500.0])
    assert not region.contains([500.1])


# ---------------------------------------------------------------------------
# splitting
# ---------------------------------------------------------------------------

def test_split_1d_disjoint():
    region = GridRegion.initial_1d(8, 500.0)
    part = split(region, 0.0)
    assert part.left.axes[0].origin == 0 and part.left.axes[0].count == 4
    assert part.right.axes[0].origin == 4 and part.right.axes[0].count == 4
    assert part.overlap_count == 0
    assert part.midpoint == pytest.approx(250.0)


def test_split_1d_overlapping():
    region = GridRegion.initial_1d(8, 500.0)
    part = split(region, 0.2)
    assert part.next_count == 6
    assert part.left.axes[0].origin == 0 and part.left.axes[0].count == 6
    assert part.right.axes[0].origin == 2 and part.right.axes[0].count == 6
    assert part.overlap_count == 4


def test_split_even_alpha_zero_always_disjoint():
    for n in range(2, 65, 2):
        part = split(GridRegion.initial_1d(n, 100.0), 0.0)
        assert part.overlap_count == 0


def test_split_2d_longest_dimension():
    region = GridRegion.initial_2d((8, 4), (500.0, 100.0))
    assert split(region, 0.0).split_dim == 0
    # larger physical extent wins even with fewer points
    region = GridRegion.initial_2d((8, 4), (100.0, 500.0))
    assert split(region, 0.0).split_dim == 1
    # tie breaks toward the lowest axis
    region = GridRegion.initial_2d((8, 8), (500.0, 500.0))
    assert split(region, 0.0).split_dim == 0


def test_split_preserves_non_split_axes():
    region = GridRegion.initial_2d((16, 4), (500.0, 100.0))
    part = split(region, 0.1)
    assert part.left.axes[1] == region.axes[1]
    assert part.right.axes[1] == region.axes[1]


def test_split_single_point_errors():
    with pytest.raises(CannotSplitError):
        split(GridRegion.initial_1d(1, 500.0), 0.0)
    with pytest.raises(CannotSplitError):
        split(GridRegion.initial_2d((1, 1), (10.0, 10.0)), 0.1)


def test_split_matches_threshold_set_definition():
    """Index slices equal the midpoint/threshold formulation on every grid."""
    alphas = [0.0, 0.05, 0.1, 0.2, 0.25, 0.3333, 0.4, 0.5]
    for n in range(2, 65):
        region = GridRegion.initial_1d(n, 500.0)
        xs = region.points()[:, 0]
        m = 0.5 * (xs[0] + xs[-1])
        step = region.axes[0].step
        for alpha in alphas:
            part = split(region, alpha)
            delta = part.delta
            left_set = xs <= m + delta * step
            right_set = xs >= m - delta * step
            got_left = np.zeros(n, dtype=bool)
            got_left[: part.next_count] = True
            got_right = np.zeros(n, dtype=bool)
            got_right[n - part.next_count :] = True
            assert np.array_equal(left_set, got_left), (n, alpha)
            assert np.array_equal(right_set, got_right), (n, alpha)


# ---------------------------------------------------------------------------
# symmetric partners
# ---------------------------------------------------------------------------

def test_symmetric_partner_1d():
    region = GridRegion.initial_1d(10, 500.0)
    assert symmetric_partner([100.0], region, 0)[0] == pytest.approx(400.0)


def test_symmetric_partner_2d():
    region = GridRegion.initial_2d((4, 10), (200.0, 500.0))
    partner = symmetric_partner([100.0, 50.0], region, 1)
    assert np.allclose(partner, [100.0, 450.0])


def test_symmetric_partner_involutive():
    region = GridRegion.initial_2d((8, 6), (500.0, 300.0))
    rng = np.random.default_rng(7)
    for _ in range(100):
        p = rng.uniform([0.0, 0.0], [500.0, 300.0])
        for dim in (0, 1):
            q = symmetric_partner(symmetric_partner(p, region, dim), region, dim)
            assert np.allclose(q, p, atol=1e-9)


def test_symmetric_partner_outside_region_errors():
    region = GridRegion.initial_1d(8, 500.0)
    with pytest.raises(ValueError):
        symmetric_partner([600.0], region, 0)


def test_partner_swaps_exclusive_sets():
    """Every left-exclusive point maps onto the right-exclusive set and back."""
    for n in (7, 8, 16, 33):
        for alpha in (0.05, 0.1, 0.2):
            region = GridRegion.initial_1d(n, 500.0)
            part = split(region, alpha)
            xs = region.points()[:, 0]
            n2 = part.next_count
            left_excl = xs[: n - n2]
            right_excl = xs[n2:]
            # partner of index i is index n-1-i, so the left-exclusive block
            # maps exactly onto the right-exclusive block
            mapped = sorted(symmetric_partner([x], region, 0)[0] for x in left_excl)
            assert np.allclose(mapped, sorted(right_excl), atol=1e-9)


def test_partition_counts_follow_rule():
    for n in (2, 3, 9, 16, 31):
        for alpha in (0.0, 0.1, 0.3):
            part = split(GridRegion.initial_1d(n, 100.0), alpha)
            assert part.next_count == overlap_count(n, alpha)
            assert part.overlap_count == 2 * part.next_count - n
            assert part.overlap_count >= 0
