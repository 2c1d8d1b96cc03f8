"""Bloch Hamiltonian fields, symmetry operators and spectral flattening."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BandMismatch, Gapless, NotGrading, NotHermitian, NotUnitary
from .grid import BrillouinGrid

HERMITIAN_TOL = 1e-12
GRADING_TOL = 1e-10
SYMMETRY_TOL = 1e-10
DEFAULT_GAP_TOL = 1e-8


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def pointwise_norm(a: np.ndarray) -> np.ndarray:
    """Frobenius norm of each trailing matrix."""
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))


def max_norm(a: np.ndarray) -> float:
    return float(np.max(pointwise_norm(a))) if a.size else 0.0


def _frozen(values, grid: BrillouinGrid) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    d = grid.dimension
    if arr.ndim != d + 2 or arr.shape[:d] != grid.shape or arr.shape[-1] != arr.shape[-2]:
        raise BandMismatch(f"expected shape {grid.shape} + (M, M), got {arr.shape}")
    if arr.shape[-1] < 1:
        raise BandMismatch("need at least one band")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HermitianField:
    """One Hermitian M x M matrix per grid point."""

    grid: BrillouinGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, self.grid))
        err = max_norm(self.values - dagger(self.values))
        if err >= HERMITIAN_TOL * max(1.0, max_norm(self.values)):
            raise NotHermitian(f"H(k) - H(k)^dagger has norm {err:.3e}")

    @property
    def bands(self) -> int:
        return self.values.shape[-1]

    def scaled(self, c: float) -> "HermitianField":
        return HermitianField(self.grid, c * self.values)


@dataclass(frozen=True, eq=False)
class GradingField(HermitianField):
    """Hermitian field squaring to the identity at every point."""

    def __post_init__(self):
        super().__post_init__()
        eye = np.eye(self.bands)
        err = max_norm(self.values @ self.values - eye)
        if err >= GRADING_TOL:
            raise NotGrading(f"Gamma(k)^2 - 1 has norm {err:.3e}")


@dataclass(frozen=True, eq=False)
class ChiralOperator:
    """Constant sublattice symmetry S with S^2 = 1, S = S^dagger."""

    matrix: np.ndarray

    def __post_init__(self):
        s = np.array(self.matrix, dtype=complex)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise BandMismatch(f"chiral operator must be 2N x 2N, got shape {s.shape}")
        eye = np.eye(s.shape[0])
        if np.linalg.norm(s @ s - eye) >= HERMITIAN_TOL or np.linalg.norm(s - s.conj().T) >= HERMITIAN_TOL:
            raise NotGrading("S must be self-adjoint and square to the identity")
        if abs(np.trace(s)) > 0.5:
            raise NotGrading("S must have equally many +1 and -1 eigenvalues")
        s.setflags(write=False)
        object.__setattr__(self, "matrix", s)

    @classmethod
    def canonical(cls, n: int) -> "ChiralOperator":
        """S = diag(1_N, -1_N)."""
        return cls(np.diag(np.concatenate([np.ones(n), -np.ones(n)])))

    @property
    def bands(self) -> int:
        return self.matrix.shape[0]

    @property
    def half(self) -> int:
        return self.bands // 2

    @property
    def is_canonical(self) -> bool:
        return bool(np.array_equal(self.matrix, ChiralOperator.canonical(self.half).matrix))

    def canonicalizing_unitary(self) -> np.ndarray:
        """Unitary V with V S V^dagger = diag(1_N, -1_N).

        Conjugating a grading by V moves it into the basis the ``chiral``
        module works in.
        """
        w, v = np.linalg.eigh(self.matrix)
        order = np.argsort(-w, kind="stable")
        return v[:, order].conj().T


@dataclass(frozen=True, eq=False)
class TimeReversalOperator:
    """Antilinear T acting as psi -> U_T conj(psi), with T^2 = +1."""

    matrix: np.ndarray

    def __post_init__(self):
        u = np.array(self.matrix, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise BandMismatch(f"U_T must be square, got shape {u.shape}")
        eye = np.eye(u.shape[0])
        if np.linalg.norm(u @ u.conj().T - eye) >= HERMITIAN_TOL:
            raise NotUnitary("U_T must be unitary")
        if np.linalg.norm(u @ u.conj() - eye) >= HERMITIAN_TOL:
            raise NotGrading("time reversal must square to +1 (U_T conj(U_T) = 1)")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)

    @classmethod
    def complex_conjugation(cls, bands: int) -> "TimeReversalOperator":
        return cls(np.eye(bands))

    @property
    def bands(self) -> int:
        return self.matrix.shape[0]


def spectral_gap(H: HermitianField) -> float:
    """Smallest |eigenvalue| of H(k) over the whole grid."""
    w = np.linalg.eigvalsh(H.values)
    return float(np.min(np.abs(w)))


def flatten(H: HermitianField, gap_tolerance: float = DEFAULT_GAP_TOL) -> GradingField:
    """Gamma(k) = sgn(H(k)), keeping eigenvectors and mapping eigenvalues to +-1."""
    w, v = np.linalg.eigh(H.values)
    gap = float(np.min(np.abs(w)))
    if gap <= gap_tolerance:
        raise Gapless(f"spectral gap {gap:.3e} does not exceed tolerance {gap_tolerance:.1e}")
    gamma = (v * np.sign(w)[..., None, :]) @ dagger(v)
    gamma = 0.5 * (gamma + dagger(gamma))
    return GradingField(H.grid, gamma)


def _check_bands(field: HermitianField, op) -> None:
    if field.bands != op.bands:
        raise BandMismatch(f"field has {field.bands} bands, operator acts on {op.bands}")


def check_chiral(gamma: HermitianField, S: ChiralOperator) -> bool:
    """True iff S anticommutes with the field at every grid point."""
    _check_bands(gamma, S)
    s = S.matrix
    return max_norm(s @ gamma.values + gamma.values @ s) < SYMMETRY_TOL


def check_time_reversal(gamma: HermitianField, T: TimeReversalOperator) -> bool:
    """True iff U_T conj(Gamma(k)) U_T^-1 = Gamma(-k) at every grid point."""
    _check_bands(gamma, T)
    u = T.matrix
    transformed = u @ np.conj(gamma.values) @ u.conj().T
    return max_norm(transformed - gamma.grid.reflect(gamma.values)) < SYMMETRY_TOL
