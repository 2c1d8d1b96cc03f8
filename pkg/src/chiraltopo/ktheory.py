"""Karoubi triples (W, Gamma1, Gamma2) and their reduction to integers.

A triple records the obstruction met when passing from Gamma1 to Gamma2
on a fixed carrier W. Two carriers reduce: a point (the class counts the
change in rank of the -1 eigenspace) and a d=1 torus with chiral
structure (the class is the relative winding).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from .bloch import ChiralOperator, GradingField, check_chiral, max_norm
from .chiral import block_diag, to_canonical_basis
from .errors import (
    CarrierMismatch,
    MidpointMismatch,
    NotChiral,
    NotGrading,
    NotProjection,
    NotUnitary,
    UnsupportedCarrier,
)
from .grid import BrillouinGrid
from .invariants import relative_winding

EIGEN_SNAP_TOL = 1e-8
EQUALITY_TOL = 1e-10
MATRIX_TOL = 1e-12
UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class PointModule:
    dimension: int


@dataclass(frozen=True, eq=False)
class TorusModule:
    grid: BrillouinGrid
    chiral: ChiralOperator

    @property
    def bands(self) -> int:
        return self.chiral.bands

    def same_as(self, other: "TorusModule") -> bool:
        return self.grid == other.grid and np.array_equal(self.chiral.matrix, other.chiral.matrix)


Module = Union[PointModule, TorusModule]


class DifferenceKind(str, enum.Enum):
    RANK = "RankDifference"
    WINDING = "WindingDifference"


@dataclass(frozen=True)
class DifferenceClass:
    kind: DifferenceKind
    value: int


def _check_point_grading(m: np.ndarray, n: int) -> np.ndarray:
    m = np.array(m, dtype=complex)
    if m.shape != (n, n):
        raise NotGrading(f"grading must be {n} x {n}, got {m.shape}")
    if np.linalg.norm(m - m.conj().T) >= EQUALITY_TOL or np.linalg.norm(m @ m - np.eye(n)) >= EQUALITY_TOL:
        raise NotGrading("grading must be self-adjoint and square to the identity")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class KaroubiTriple:
    module: Module
    gamma1: Union[np.ndarray, GradingField]
    gamma2: Union[np.ndarray, GradingField]

    def __post_init__(self):
        if isinstance(self.module, PointModule):
            n = self.module.dimension
            object.__setattr__(self, "gamma1", _check_point_grading(self.gamma1, n))
            object.__setattr__(self, "gamma2", _check_point_grading(self.gamma2, n))
            return
        for g in (self.gamma1, self.gamma2):
            if not isinstance(g, GradingField):
                raise NotGrading("torus triples need GradingField entries")
            if g.grid != self.module.grid:
                raise CarrierMismatch("grading lives on a different grid than the carrier")
            if not check_chiral(g, self.module.chiral):
                raise NotChiral("grading does not anticommute with the carrier's S")

    @classmethod
    def point(cls, gamma1, gamma2) -> "KaroubiTriple":
        n = np.asarray(gamma1).shape[0]
        return cls(PointModule(n), gamma1, gamma2)

    @classmethod
    def torus(cls, gamma1: GradingField, gamma2: GradingField, S: ChiralOperator | None = None) -> "KaroubiTriple":
        if S is None:
            S = ChiralOperator.canonical(gamma1.bands // 2)
        return cls(TorusModule(gamma1.grid, S), gamma1, gamma2)


def minus_rank(gamma: np.ndarray) -> int:
    """Number of -1 eigenvalues, after snapping the spectrum to +-1."""
    w = np.linalg.eigvalsh(gamma)
    if np.any(np.minimum(np.abs(w - 1), np.abs(w + 1)) > EIGEN_SNAP_TOL):
        raise NotGrading(f"eigenvalues {w} are not all +-1")
    return int(np.sum(w < 0))


def reduce_point(t: KaroubiTriple) -> DifferenceClass:
    if not isinstance(t.module, PointModule):
        raise CarrierMismatch("reduce_point needs a point carrier")
    return DifferenceClass(DifferenceKind.RANK, minus_rank(t.gamma2) - minus_rank(t.gamma1))


def reduce_torus(t: KaroubiTriple) -> DifferenceClass:
    if not isinstance(t.module, TorusModule):
        raise CarrierMismatch("reduce_torus needs a torus carrier")
    if t.module.grid.dimension != 1:
        raise UnsupportedCarrier(f"torus triples reduce only for d=1, got d={t.module.grid.dimension}")
    S = t.module.chiral
    g1, g2 = t.gamma1, t.gamma2
    if not S.is_canonical:
        g1, S_c = to_canonical_basis(g1, S)
        g2, _ = to_canonical_basis(g2, S)
        S = S_c
    report = relative_winding(g1, g2, S)
    return DifferenceClass(DifferenceKind.WINDING, report.value)


def reduce(t: KaroubiTriple) -> DifferenceClass:
    if isinstance(t.module, PointModule):
        return reduce_point(t)
    return reduce_torus(t)


def _canonical_sum_order(n_a: int, n_b: int) -> np.ndarray:
    """Index order taking [a+, a-, b+, b-] to [a+, b+, a-, b-]."""
    a_plus = np.arange(n_a)
    a_minus = n_a + np.arange(n_a)
    b_plus = 2 * n_a + np.arange(n_b)
    b_minus = 2 * n_a + n_b + np.arange(n_b)
    return np.concatenate([a_plus, b_plus, a_minus, b_minus])


def add_triples(a: KaroubiTriple, b: KaroubiTriple) -> KaroubiTriple:
    """Direct sum of carriers and gradings.

    For torus carriers with canonical S the basis is reordered so that the
    summed S is again diag(1, -1).
    """
    if isinstance(a.module, PointModule) and isinstance(b.module, PointModule):
        n = a.module.dimension + b.module.dimension
        return KaroubiTriple(
            PointModule(n), block_diag(a.gamma1, b.gamma1), block_diag(a.gamma2, b.gamma2)
        )
    if isinstance(a.module, TorusModule) and isinstance(b.module, TorusModule):
        if a.module.grid != b.module.grid:
            raise CarrierMismatch("torus triples live on different grids")
        s = block_diag(a.module.chiral.matrix, b.module.chiral.matrix)
        g1 = block_diag(a.gamma1.values, b.gamma1.values)
        g2 = block_diag(a.gamma2.values, b.gamma2.values)
        if a.module.chiral.is_canonical and b.module.chiral.is_canonical:
            order = _canonical_sum_order(a.module.chiral.half, b.module.chiral.half)
            s = s[np.ix_(order, order)]
            g1 = g1[..., order[:, None], order]
            g2 = g2[..., order[:, None], order]
        grid = a.module.grid
        return KaroubiTriple(
            TorusModule(grid, ChiralOperator(s)), GradingField(grid, g1), GradingField(grid, g2)
        )
    raise CarrierMismatch("cannot add triples over different carrier kinds")


def invert_triple(t: KaroubiTriple) -> KaroubiTriple:
    """The obstruction taken in the opposite order."""
    return KaroubiTriple(t.module, t.gamma2, t.gamma1)


def _same_carrier(a: Module, b: Module) -> bool:
    if isinstance(a, PointModule) and isinstance(b, PointModule):
        return a == b
    if isinstance(a, TorusModule) and isinstance(b, TorusModule):
        return a.same_as(b)
    return False


def gradings_close(g: Union[np.ndarray, GradingField], h: Union[np.ndarray, GradingField]) -> bool:
    gv = g.values if isinstance(g, GradingField) else np.asarray(g)
    hv = h.values if isinstance(h, GradingField) else np.asarray(h)
    return gv.shape == hv.shape and max_norm(gv - hv) < EQUALITY_TOL


def compose_triples(a: KaroubiTriple, b: KaroubiTriple) -> KaroubiTriple:
    """(W, G1, G2) followed by (W, G2, G3) gives (W, G1, G3)."""
    if not _same_carrier(a.module, b.module):
        raise CarrierMismatch("composed triples must share a carrier")
    if not gradings_close(a.gamma2, b.gamma1):
        raise MidpointMismatch("end grading of the first triple differs from start of the second")
    return KaroubiTriple(a.module, a.gamma1, b.gamma2)


def is_trivial(t: KaroubiTriple) -> bool:
    return gradings_close(t.gamma1, t.gamma2)


def _check_unitary(u: np.ndarray, name: str) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(f"{name} must be a square matrix, got shape {u.shape}")
    if np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) >= UNITARY_TOL:
        raise NotUnitary(f"{name} is not unitary")
    return u


def rotation_path(u: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
    """U_t = diag(u, 1) R(t) diag(v, 1) R(t)^-1, R(t) the rotation by pi t / 2.

    U_0 = diag(uv, 1) and U_1 = diag(u, v).
    """
    u = _check_unitary(u, "u")
    v = _check_unitary(v, "v")
    if u.shape != v.shape:
        raise NotUnitary(f"u and v differ in size: {u.shape} vs {v.shape}")
    n = u.shape[0]
    one = np.eye(n)
    c, s = np.cos(np.pi * t / 2), np.sin(np.pi * t / 2)
    rot = np.block([[c * one, -s * one], [s * one, c * one]])
    rot_inv = np.block([[c * one, s * one], [-s * one, c * one]])
    return block_diag(u, one) @ rot @ block_diag(v, one) @ rot_inv


@dataclass(frozen=True)
class ProjectionPath:
    ts: np.ndarray
    projections: np.ndarray
    max_idempotency_error: float
    max_selfadjoint_error: float
    start_error: float
    end_error: float
    max_step: float

    @property
    def ok(self) -> bool:
        return max(self.max_idempotency_error, self.max_selfadjoint_error, self.start_error, self.end_error) < MATRIX_TOL


def projection_homotopy(p0: np.ndarray, u: np.ndarray, samples: int) -> ProjectionPath:
    """Sample P_t = U_t diag(p0, 0) U_t^-1 with U_t = rotation_path(u, u^-1, t).

    The path joins diag(p0, 0) to diag(u p0 u^-1, 0) through projections.
    """
    p0 = np.asarray(p0, dtype=complex)
    if p0.ndim != 2 or p0.shape[0] != p0.shape[1]:
        raise NotProjection(f"p0 must be square, got shape {p0.shape}")
    if np.linalg.norm(p0 @ p0 - p0) >= MATRIX_TOL or np.linalg.norm(p0 - p0.conj().T) >= MATRIX_TOL:
        raise NotProjection("p0 must satisfy p0^2 = p0 = p0^dagger")
    u = _check_unitary(u, "u")
    if samples < 2:
        raise ValueError("need at least two samples")
    n = p0.shape[0]
    start = block_diag(p0, np.zeros((n, n)))
    end = block_diag(u @ p0 @ u.conj().T, np.zeros((n, n)))
    ts = np.linspace(0.0, 1.0, samples)
    u_inv = u.conj().T
    paths = []
    for t in ts:
        ut = rotation_path(u, u_inv, t)
        paths.append(ut @ start @ ut.conj().T)
    ps = np.array(paths)
    steps = np.linalg.norm(np.diff(ps, axis=0), axis=(-2, -1))
    return ProjectionPath(
        ts=ts,
        projections=ps,
        max_idempotency_error=max_norm(ps @ ps - ps),
        max_selfadjoint_error=max_norm(ps - np.conj(np.swapaxes(ps, -1, -2))),
        start_error=float(np.linalg.norm(ps[0] - start)),
        end_error=float(np.linalg.norm(ps[-1] - end)),
        max_step=float(steps.max()) if steps.size else 0.0,
    )
