"""Uniform discretization of the Brillouin torus T^d."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import AxisOutOfRange, GridTooSmall, InvalidDimension

MAX_DIMENSION = 3


@dataclass(frozen=True)
class GridPoint:
    indices: tuple[int, ...]
    momentum: tuple[float, ...]


@dataclass(frozen=True)
class BrillouinGrid:
    """L points per axis on [0, 2*pi)^d, row-major ordering.

    Fields living on the grid are numpy arrays whose leading ``d`` axes
    are the grid axes (shape ``(L,) * d``) followed by any matrix axes.
    """

    dimension: int
    points_per_axis: int

    def __post_init__(self):
        if not 1 <= self.dimension <= MAX_DIMENSION:
            raise InvalidDimension(f"dimension must be in 1..{MAX_DIMENSION}, got {self.dimension}")
        if self.points_per_axis < 2:
            raise GridTooSmall(f"need at least 2 points per axis, got {self.points_per_axis}")

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.points_per_axis

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dimension

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dimension

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dimension

    def axis(self) -> np.ndarray:
        """Momenta along a single axis, 2*pi*j/L."""
        return 2.0 * np.pi * np.arange(self.points_per_axis) / self.points_per_axis

    def momenta(self) -> tuple[np.ndarray, ...]:
        """Broadcast momentum arrays, one per axis, each of shape ``self.shape``."""
        k = self.axis()
        return tuple(np.meshgrid(*([k] * self.dimension), indexing="ij"))

    def points(self) -> Iterator[GridPoint]:
        k = self.axis()
        for idx in np.ndindex(*self.shape):
            yield GridPoint(tuple(int(i) for i in idx), tuple(float(k[i]) for i in idx))

    def wrap(self, indices) -> tuple[int, ...]:
        return tuple(int(i) % self.points_per_axis for i in indices)

    def shift(self, field: np.ndarray, axis: int, steps: int = 1) -> np.ndarray:
        """Return g with g[k] = field[k + steps * dk * e_axis] (periodic)."""
        self._check_axis(axis)
        return np.roll(field, -steps, axis=axis)

    def reflect(self, field: np.ndarray) -> np.ndarray:
        """Return g with g[k] = field[-k], index j -> (-j) mod L on every axis."""
        idx = (-np.arange(self.points_per_axis)) % self.points_per_axis
        out = field
        for ax in range(self.dimension):
            out = np.take(out, idx, axis=ax)
        return out

    def _check_axis(self, axis: int) -> None:
        if not 0 <= axis < self.dimension:
            raise AxisOutOfRange(f"axis {axis} not in [0, {self.dimension})")


def make_grid(d: int, L: int) -> BrillouinGrid:
    return BrillouinGrid(d, L)


def evaluate(grid: BrillouinGrid, field) -> np.ndarray:
    """Materialize ``field`` on the grid.

    ``field`` may already be an array (leading axes ``grid.shape``) or a
    callable taking the ``d`` broadcast momentum arrays.
    """
    if callable(field):
        values = np.asarray(field(*grid.momenta()))
        if values.shape[: grid.dimension] != grid.shape:
            values = np.broadcast_to(values, grid.shape + values.shape[grid.dimension :])
        return values
    values = np.asarray(field)
    if values.shape[: grid.dimension] != grid.shape:
        raise ValueError(f"field shape {values.shape} does not start with grid shape {grid.shape}")
    return values


def integrate(grid: BrillouinGrid, field: np.ndarray | Callable) -> complex:
    """Riemann sum of a scalar field times (dk)^d.

    The sum runs over the flattened row-major array, so identical input
    gives bit-identical output.
    """
    values = evaluate(grid, field)
    if values.shape != grid.shape:
        raise ValueError(f"integrate expects a scalar field of shape {grid.shape}, got {values.shape}")
    flat = np.ascontiguousarray(values, dtype=complex).reshape(-1)
    return complex(np.sum(flat) * grid.cell_volume)


def finite_difference(grid: BrillouinGrid, field: np.ndarray | Callable, axis: int, order: int = 2) -> np.ndarray:
    """Periodic central difference along ``axis``.

    ``order=2`` is the three-point stencil (f(k+dk) - f(k-dk)) / (2 dk);
    ``order=4`` is the five-point stencil, which needs L >= 5.
    """
    grid._check_axis(axis)
    values = evaluate(grid, field)
    h = grid.spacing
    if order == 2:
        return (np.roll(values, -1, axis=axis) - np.roll(values, 1, axis=axis)) / (2.0 * h)
    if order == 4:
        if grid.points_per_axis < 5:
            raise GridTooSmall("the fourth-order stencil needs at least 5 points per axis")
        near = np.roll(values, -1, axis=axis) - np.roll(values, 1, axis=axis)
        far = np.roll(values, -2, axis=axis) - np.roll(values, 2, axis=axis)
        return (8.0 * near - far) / (12.0 * h)
    raise ValueError(f"order must be 2 or 4, got {order}")
