import numpy as np
import pytest

from distspec import measure as M
from distspec.boxdim import box_count, box_dim_estimate, min_positive_gap, resolution_grid
from distspec.spectrum import WindowError


def test_box_count_examples():
    assert box_count([[0.3, 0.4]], 0.01) == 1
    assert box_count([[0.0], [1.0]], 0.4) == 2
    with pytest.raises(ValueError):
        box_count([[0.0]], 0.0)


def test_cantor_counts_are_powers_of_two():
    pts = M.make_cantor_measure(1 / 3, 10).positions
    for k in range(1, 9):
        assert box_count(pts, 3.0**-k) == 2**k


def test_uniform_square_dimension():
    pts = M.make_uniform_cube(2, 10_000, seed=1).positions
    dim, curve = box_dim_estimate(pts, 2.0 ** -np.arange(2, 7))
    assert 1.85 <= dim <= 2.05
    assert np.all(np.diff(curve.count) >= 0)  # eps decreasing, counts non-decreasing


def test_single_point_dimension_zero():
    dim, _ = box_dim_estimate([[0.5]], 2.0 ** -np.arange(1, 6))
    assert dim == 0.0


def test_cantor_dimension_estimate():
    pts = M.make_cantor_measure(1 / 3, 12).positions
    dim, curve = box_dim_estimate(pts, 3.0 ** -np.arange(2, 9))
    assert 0.58 <= dim <= 0.68
    assert curve.to_csv().splitlines()[0] == "epsilon,count"


def test_grid_validation():
    with pytest.raises(WindowError):
        box_dim_estimate([[0.0]], [0.5, 0.25, 0.125])


def test_translation_changes_counts_by_at_most_2_to_the_m():
    pts = M.make_uniform_ball(3, 3000, seed=2).positions
    for eps in (0.5, 0.2, 0.05):
        a, b = box_count(pts, eps), box_count(pts + [0.31, -0.17, 0.05], eps)
        assert a <= 8 * b and b <= 8 * a


def test_translation_changes_dimension_little():
    pts = M.make_cantor_measure(1 / 3, 14).positions
    grid = 3.0 ** -np.arange(2, 11)
    a, _ = box_dim_estimate(pts, grid)
    for shift in np.random.default_rng(0).uniform(0, 1, 4):
        assert abs(box_dim_estimate(pts + shift, grid)[0] - a) <= 0.05
    # boundary cells of a filled square only wash out at fine scales
    sq = M.make_uniform_cube(2, 200_000, seed=1).positions
    grid = 2.0 ** -np.arange(4, 9)
    a, _ = box_dim_estimate(sq, grid)
    assert abs(box_dim_estimate(sq + 0.123, grid)[0] - a) <= 0.05


def test_resolution_grid_respects_gap():
    vals = np.array([0.0, 0.1, 0.3, 1.0])
    g = resolution_grid(vals, 0.5, 6)
    assert g.min() >= 2 * min_positive_gap(vals) - 1e-15 and g[0] == 0.5
    assert min_positive_gap([1.0]) == float("inf")
    with pytest.raises(WindowError):
        resolution_grid(vals, 0.1, 4)
