import numpy as np
from scipy import stats

from mattertransport import streams


def test_shape_and_range():
    u = streams.counter_uniforms(3, np.arange(10), 4, 5, streams.DELAY)
    assert u.shape == (10, 4, 5)
    assert np.all((u >= 0) & (u < 1))


def test_grid_extension_is_consistent():
    small = streams.counter_uniforms(9, [0, 1, 2], 2, 3, streams.DURATION)
    big = streams.counter_uniforms(9, [0, 1, 2], 5, 8, streams.DURATION)
    np.testing.assert_array_equal(small, big[:, :2, :3])


def test_replicate_order_independent():
    a = streams.counter_uniforms(1, [5, 6, 7], 2, 2, 0)
    b = streams.counter_uniforms(1, [7, 5, 6], 2, 2, 0)
    np.testing.assert_array_equal(a[[2, 0, 1]], b)


def test_channels_and_seeds_differ():
    a = streams.counter_uniforms(1, range(100), 1, 1, 0)
    assert not np.array_equal(a, streams.counter_uniforms(1, range(100), 1, 1, 1))
    assert not np.array_equal(a, streams.counter_uniforms(2, range(100), 1, 1, 0))


def test_uniformity_and_independence():
    u = streams.counter_uniforms(0, np.arange(50_000), 2, 2, 0).ravel()
    assert stats.kstest(u, "uniform").pvalue > 1e-3
    v = streams.counter_uniforms(0, np.arange(50_000), 2, 2, 1).ravel()
    assert abs(np.corrcoef(u, v)[0, 1]) < 0.01
    assert abs(np.corrcoef(u[:-1], u[1:])[0, 1]) < 0.01
