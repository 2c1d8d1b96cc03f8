"""Integer invariants: d=1 winding, d=2 first Chern number, d=3 odd winding.

Sign conventions
----------------
* winding_number: q_n(k) = exp(-i n k) has winding +n, i.e. the value is
  (i / 2 pi) * integral of d log det Q.
* chern_number: link variables along +x then +y, plaquette fluxes summed
  counter-clockwise. The lower band of sin kx sx + sin ky sy +
  (m - cos kx - cos ky) sz has Chern number +1 at m = 1.
* winding3: -(1 / 24 pi^2) * integral of eps_ijk tr(A_i A_j A_k),
  A_i = Q^-1 d_i Q by five-point central differences, the degree-3 member of the same normalization as the
  d=1 formula.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bloch import ChiralOperator, HermitianField, dagger, max_norm
from .chiral import UnitaryField, extract_q
from .errors import (
    BandMismatch,
    GridTooCoarse,
    NotProjection,
    SingularLink,
    WrongDimension,
)
from .grid import BrillouinGrid, finite_difference

PROJECTION_TOL = 1e-10
LINK_TOL = 1e-12
# three-point differences leave ~3e-2 error on the degree map at L=32
WINDING3_STENCIL_ORDER = 4

QUANTIZATION_TOL = {
    "Winding1": 1e-9,
    "Chern2": 1e-12,
    "Winding3": 1e-2,
}


class InvariantKind(str, enum.Enum):
    WINDING1 = "Winding1"
    CHERN2 = "Chern2"
    WINDING3 = "Winding3"


@dataclass(frozen=True)
class InvariantReport:
    kind: InvariantKind
    raw_value: float
    value: int
    residual: float
    grid_L: int

    @classmethod
    def from_raw(cls, kind: InvariantKind, raw: float, grid: BrillouinGrid) -> "InvariantReport":
        value = int(round(raw))
        return cls(kind, float(raw), value, abs(raw - value), grid.points_per_axis)

    @property
    def quantized(self) -> bool:
        return self.residual < QUANTIZATION_TOL[self.kind.value]


def _require_dim(grid: BrillouinGrid, d: int) -> None:
    if grid.dimension != d:
        raise WrongDimension(f"needs a d={d} grid, got d={grid.dimension}")


def phase_increments(Q: UnitaryField) -> np.ndarray:
    """Principal-value increments of arg det Q between neighbours, last one closing the loop."""
    _require_dim(Q.grid, 1)
    det = np.linalg.det(Q.values)
    steps = np.angle(np.roll(det, -1) * np.conj(det))
    bad = np.flatnonzero(np.abs(steps) >= math.pi * (1 - 1e-12))
    if bad.size:
        raise GridTooCoarse(
            f"phase of det Q jumps by ~pi between points {bad[0]} and {(bad[0] + 1) % Q.grid.points_per_axis}; refine the grid"
        )
    return steps


def unwrapped_phase(Q: UnitaryField) -> tuple[np.ndarray, np.ndarray]:
    """Momenta and the continuous phase arg det Q(k) along the loop, starting at k=0."""
    steps = phase_increments(Q)
    phase0 = float(np.angle(np.linalg.det(Q.values[0])))
    phase = phase0 + np.concatenate([[0.0], np.cumsum(steps[:-1])])
    return Q.grid.axis(), phase


def winding_number(Q: UnitaryField) -> InvariantReport:
    steps = phase_increments(Q)
    raw = math.fsum(steps) / (-2.0 * math.pi)
    return InvariantReport.from_raw(InvariantKind.WINDING1, raw, Q.grid)


def _occupied_frame(P: HermitianField) -> np.ndarray:
    values = P.values
    err = max_norm(values @ values - values)
    if err >= PROJECTION_TOL:
        raise NotProjection(f"P(k)^2 - P(k) has norm {err:.3e}")
    w, v = np.linalg.eigh(values)
    ranks = np.sum(w > 0.5, axis=-1)
    rank = int(ranks.flat[0])
    if np.any(ranks != rank):
        raise NotProjection("projection rank varies across the grid")
    if rank == 0:
        return v[..., :, :0]
    return v[..., :, -rank:]


def _links(frame: np.ndarray, axis: int) -> np.ndarray:
    """U(k) = det(V(k)^dagger V(k + e_axis)) / |.|."""
    overlap = np.linalg.det(dagger(frame) @ np.roll(frame, -1, axis=axis))
    mag = np.abs(overlap)
    if np.any(mag < LINK_TOL):
        raise SingularLink(f"link overlap {float(mag.min()):.3e} along axis {axis}; gap closes on the grid")
    return overlap / mag


def plaquette_flux(P: HermitianField) -> np.ndarray:
    """Field strength per plaquette, Im log of the link product around it.

    Entry [i, j] belongs to the plaquette with lower-left corner (i, j).
    """
    _require_dim(P.grid, 2)
    frame = _occupied_frame(P)
    if frame.shape[-1] == 0:
        return np.zeros(P.grid.shape)
    ux = _links(frame, 0)
    uy = _links(frame, 1)
    loop = ux * np.roll(uy, -1, axis=0) * np.conj(np.roll(ux, -1, axis=1)) * np.conj(uy)
    return np.angle(loop)


def chern_number(P: HermitianField) -> InvariantReport:
    """First Chern number of a projection field by the lattice plaquette method."""
    flux = plaquette_flux(P)
    raw = math.fsum(flux.ravel()) / (2.0 * math.pi)
    return InvariantReport.from_raw(InvariantKind.CHERN2, raw, P.grid)


def valence_projection(gamma: HermitianField) -> HermitianField:
    """(1 - Gamma) / 2, the projection onto the -1 eigenspace of a grading."""
    values = 0.5 * (np.eye(gamma.bands) - gamma.values)
    return HermitianField(gamma.grid, values)


_LEVI_CIVITA = [(p, 1 if (p[1] - p[0]) % 3 == 1 else -1) for p in itertools.permutations(range(3))]


def winding3_density(Q: UnitaryField, order: int = WINDING3_STENCIL_ORDER) -> np.ndarray:
    """eps_ijk tr(A_i A_j A_k) at every grid point, A_i by central differences."""
    _require_dim(Q.grid, 3)
    qinv = dagger(Q.values)
    a = [qinv @ finite_difference(Q.grid, Q.values, ax, order=order) for ax in range(3)]
    density = np.zeros(Q.grid.shape, dtype=complex)
    for (i, j, l), sign in _LEVI_CIVITA:
        density += sign * np.trace(a[i] @ a[j] @ a[l], axis1=-2, axis2=-1)
    return density


def winding3(Q: UnitaryField, order: int = WINDING3_STENCIL_ORDER) -> InvariantReport:
    density = winding3_density(Q, order)
    total = math.fsum(density.real.ravel()) * Q.grid.cell_volume
    raw = -total / (24.0 * math.pi**2)
    return InvariantReport.from_raw(InvariantKind.WINDING3, raw, Q.grid)


def relative_winding(gamma_a: HermitianField, gamma_b: HermitianField, S: ChiralOperator) -> InvariantReport:
    """Winding of Q_b Q_a^dagger: the obstruction met passing from gamma_a to gamma_b."""
    if gamma_a.grid != gamma_b.grid:
        raise BandMismatch("gradings live on different grids")
    qa = extract_q(gamma_a, S)
    qb = extract_q(gamma_b, S)
    return winding_number(qb @ qa.adjoint)
