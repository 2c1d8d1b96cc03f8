import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiraltopo.errors import AxisOutOfRange, GridTooSmall, InvalidDimension
from chiraltopo.grid import finite_difference, integrate, make_grid


def test_make_grid_points_d1():
    g = make_grid(1, 4)
    np.testing.assert_allclose(g.axis(), [0, np.pi / 2, np.pi, 3 * np.pi / 2])
    assert [p.indices for p in g.points()] == [(0,), (1,), (2,), (3,)]


@pytest.mark.parametrize("d, L, count", [(2, 2, 4), (3, 32, 32768), (1, 7, 7)])
def test_point_count(d, L, count):
    g = make_grid(d, L)
    assert g.size == count
    assert g.momenta()[0].size == count


def test_row_major_order():
    pts = list(make_grid(2, 3).points())
    assert [p.indices for p in pts[:4]] == [(0, 0), (0, 1), (0, 2), (1, 0)]
    assert all(0 <= k < 2 * math.pi for p in pts for k in p.momentum)


def test_spacing_times_L():
    for L in (2, 3, 64, 1000):
        g = make_grid(1, L)
        assert abs(g.spacing * L - 2 * math.pi) < 1e-12 * 2 * math.pi


def test_periodic_wrap():
    g = make_grid(3, 5)
    assert g.wrap((5, -1, 12)) == (0, 4, 2)
    f = np.arange(125).reshape(g.shape)
    assert np.array_equal(g.shift(f, 1, steps=5), f)


@pytest.mark.parametrize("d", [0, 4, -1])
def test_invalid_dimension(d):
    with pytest.raises(InvalidDimension):
        make_grid(d, 8)


def test_grid_too_small():
    with pytest.raises(GridTooSmall):
        make_grid(1, 1)


def test_integrate_constants():
    assert abs(integrate(make_grid(1, 64), lambda k: np.ones_like(k)) - 2 * np.pi) < 1e-12
    assert abs(integrate(make_grid(3, 8), lambda *k: np.ones_like(k[0])) - (2 * np.pi) ** 3) < 1e-9


def test_integrate_character_vanishes():
    assert abs(integrate(make_grid(1, 64), lambda k: np.exp(1j * k))) < 1e-12


def test_integrate_deterministic():
    g = make_grid(2, 48)
    f = np.random.default_rng(3).standard_normal(g.shape)
    assert integrate(g, f) == integrate(g, f.copy())


@settings(max_examples=30, deadline=None)
@given(
    L=st.integers(2, 64),
    d=st.integers(1, 2),
    seed=st.integers(0, 2**32 - 1),
    a=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    b=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
)
def test_integrate_linear(L, d, seed, a, b):
    g = make_grid(d, L)
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
    h = rng.standard_normal(g.shape)
    lhs = integrate(g, a * f + b * h)
    rhs = a * integrate(g, f) + b * integrate(g, h)
    scale = (abs(a) + abs(b) + 1) * g.size * g.cell_volume
    assert abs(lhs - rhs) <= 1e-12 * scale


@pytest.mark.parametrize("n", [1, 2])
def test_finite_difference_exponential(n):
    g = make_grid(1, 256)
    (k,) = g.momenta()
    df = finite_difference(g, np.exp(1j * n * k), 0)
    assert np.max(np.abs(df - 1j * n * np.exp(1j * n * k))) < 1e-3


def test_finite_difference_constant_is_zero():
    g = make_grid(2, 16)
    field = np.broadcast_to(np.array([[1, 2j], [3, 4]]), g.shape + (2, 2))
    assert np.all(finite_difference(g, field, 1) == 0)


def test_axis_out_of_range():
    with pytest.raises(AxisOutOfRange):
        finite_difference(make_grid(2, 8), np.zeros((8, 8)), 2)


def _fd_error(L, order):
    g = make_grid(1, L)
    (k,) = g.momenta()
    f = np.sin(3 * k) + 0.5 * np.cos(5 * k)
    exact = 3 * np.cos(3 * k) - 2.5 * np.sin(5 * k)
    return np.max(np.abs(finite_difference(g, f, 0, order=order) - exact))


def test_second_order_convergence():
    for L in (32, 64, 128):
        ratio = _fd_error(L, 2) / _fd_error(2 * L, 2)
        assert 3.5 <= ratio <= 4.5


def test_fourth_order_convergence():
    ratio = _fd_error(64, 4) / _fd_error(128, 4)
    assert 14 <= ratio <= 18
