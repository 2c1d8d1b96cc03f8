"""Class AIII structure in the canonical basis S = diag(1_N, -1_N).

A chiral-compatible grading is block off-diagonal,

    Gamma_Q(k) = [[0, Q(k)], [Q(k)^dagger, 0]],

so all of its topology sits in the unitary field Q. Gauge transformations
that commute with S act on Q by multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import (
    ChiralOperator,
    GradingField,
    HermitianField,
    check_chiral,
    dagger,
    max_norm,
)
from .errors import BandMismatch, NotChiral, NotUnitary
from .grid import BrillouinGrid

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class UnitaryField:
    """One unitary N x N matrix per grid point."""

    grid: BrillouinGrid
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=complex)
        d = self.grid.dimension
        if arr.ndim != d + 2 or arr.shape[:d] != self.grid.shape or arr.shape[-1] != arr.shape[-2]:
            raise BandMismatch(f"expected shape {self.grid.shape} + (N, N), got {arr.shape}")
        err = max_norm(dagger(arr) @ arr - np.eye(arr.shape[-1]))
        if err >= UNITARY_TOL:
            raise NotUnitary(f"Q(k)^dagger Q(k) - 1 has norm {err:.3e}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def size(self) -> int:
        return self.values.shape[-1]

    @classmethod
    def constant(cls, grid: BrillouinGrid, matrix) -> "UnitaryField":
        m = np.asarray(matrix, dtype=complex)
        return cls(grid, np.broadcast_to(m, grid.shape + m.shape))

    @classmethod
    def identity(cls, grid: BrillouinGrid, n: int = 1) -> "UnitaryField":
        return cls.constant(grid, np.eye(n))

    @property
    def adjoint(self) -> "UnitaryField":
        return UnitaryField(self.grid, dagger(self.values))

    def __matmul__(self, other: "UnitaryField") -> "UnitaryField":
        _same_carrier(self, other)
        return UnitaryField(self.grid, self.values @ other.values)

    def direct_sum(self, other: "UnitaryField") -> "UnitaryField":
        _same_carrier(self, other, check_size=False)
        return UnitaryField(self.grid, block_diag(self.values, other.values))


def _same_carrier(a, b, check_size: bool = True) -> None:
    if a.grid != b.grid:
        raise BandMismatch(f"fields live on different grids: {a.grid} vs {b.grid}")
    if check_size and a.values.shape[-1] != b.values.shape[-1]:
        raise BandMismatch(f"matrix sizes differ: {a.values.shape[-1]} vs {b.values.shape[-1]}")


def block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pointwise block-diagonal matrix diag(a, b) over shared leading axes."""
    lead = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    n, m = a.shape[-1], b.shape[-1]
    out = np.zeros(lead + (n + m, n + m), dtype=complex)
    out[..., :n, :n] = a
    out[..., n:, n:] = b
    return out


def _off_diagonal(upper_right: np.ndarray) -> np.ndarray:
    n = upper_right.shape[-1]
    out = np.zeros(upper_right.shape[:-2] + (2 * n, 2 * n), dtype=complex)
    out[..., :n, n:] = upper_right
    out[..., n:, :n] = dagger(upper_right)
    return out


def gamma_from_q(Q: UnitaryField) -> GradingField:
    """Gamma_Q(k) = [[0, Q(k)], [Q(k)^dagger, 0]]."""
    return GradingField(Q.grid, _off_diagonal(Q.values))


def extract_q(gamma: HermitianField, S: ChiralOperator) -> UnitaryField:
    """Upper-right block of a chiral-compatible grading."""
    if not S.is_canonical:
        raise ValueError("extract_q needs S = diag(1_N, -1_N); rotate with to_canonical_basis first")
    if not check_chiral(gamma, S):
        raise NotChiral("grading does not anticommute with S")
    n = S.half
    return UnitaryField(gamma.grid, gamma.values[..., :n, n:])


def to_canonical_basis(gamma: HermitianField, S: ChiralOperator) -> tuple[GradingField, ChiralOperator]:
    """Conjugate ``gamma`` into the basis where S is diag(1_N, -1_N)."""
    v = S.canonicalizing_unitary()
    values = v @ gamma.values @ v.conj().T
    values = 0.5 * (values + dagger(values))
    return GradingField(gamma.grid, values), ChiralOperator.canonical(S.half)


def gauge_transform(gamma: HermitianField, G: UnitaryField, block: str = "+") -> GradingField:
    """Conjugate by U_G = diag(G, 1_N) (``block="+"``) or diag(1_N, G) (``block="-"``).

    On the extracted unitary this is Q -> G Q for the + block and
    Q -> Q G^dagger for the - block.
    """
    if gamma.grid != G.grid:
        raise BandMismatch("grading and gauge field live on different grids")
    if gamma.bands != 2 * G.size:
        raise BandMismatch(f"gauge of size {G.size} cannot act on {gamma.bands} bands")
    one = np.broadcast_to(np.eye(G.size, dtype=complex), G.values.shape)
    if block == "+":
        u = block_diag(G.values, one)
    elif block == "-":
        u = block_diag(one, G.values)
    else:
        raise ValueError(f"block must be '+' or '-', got {block!r}")
    values = u @ gamma.values @ dagger(u)
    return GradingField(gamma.grid, 0.5 * (values + dagger(values)))


def gamma_from_reference(R: UnitaryField, Q: UnitaryField) -> GradingField:
    """Grading with upper-right block R(k) Q(k)^-1 relative to reference data R."""
    _same_carrier(R, Q)
    return GradingField(R.grid, _off_diagonal(R.values @ dagger(Q.values)))
