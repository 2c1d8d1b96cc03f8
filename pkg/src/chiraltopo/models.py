"""Model zoo: the q_n family, SSH chain, QWZ Chern insulator, a degree-1
map T^3 -> SU(2), and seeded random gapped fields.

Every registered model can be turned into a HermitianField; unitary-valued
models are wrapped as Gamma_Q so the CLI pipeline is uniform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bloch import HermitianField, dagger
from .chiral import UnitaryField, gamma_from_q
from .errors import Gapless, InvalidInput, WrongDimension
from .grid import BrillouinGrid

CRITICAL_TOL = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _require_dim(grid: BrillouinGrid, d: int, name: str) -> None:
    if grid.dimension != d:
        raise WrongDimension(f"{name} lives on a d={d} grid, got d={grid.dimension}")


def build_qn(n: int, grid: BrillouinGrid) -> UnitaryField:
    """q_n(k) = exp(-i n k) as a 1 x 1 unitary field."""
    _require_dim(grid, 1, "q_n")
    (k,) = grid.momenta()
    return UnitaryField(grid, np.exp(-1j * n * k)[:, None, None])


def build_ssh(t1: float, t2: float, grid: BrillouinGrid) -> HermitianField:
    """H(k) = [[0, t1 + t2 e^{-ik}], [t1 + t2 e^{ik}, 0]].

    Winding 1 when |t2| > |t1|, 0 when |t1| > |t2|.
    """
    _require_dim(grid, 1, "SSH")
    if abs(abs(t1) - abs(t2)) < CRITICAL_TOL:
        raise Gapless(f"SSH chain is gapless at |t1| = |t2| (t1={t1}, t2={t2})")
    (k,) = grid.momenta()
    q = t1 + t2 * np.exp(-1j * k)
    h = np.zeros(grid.shape + (2, 2), dtype=complex)
    h[..., 0, 1] = q
    h[..., 1, 0] = np.conj(q)
    return HermitianField(grid, h)


def build_qwz(m: float, grid: BrillouinGrid) -> HermitianField:
    """H(k) = sin kx sx + sin ky sy + (m - cos kx - cos ky) sz."""
    _require_dim(grid, 2, "QWZ")
    for critical in (-2.0, 0.0, 2.0):
        if abs(m - critical) < CRITICAL_TOL:
            raise Gapless(f"QWZ model is gapless at m = {critical:g}")
    kx, ky = grid.momenta()
    dz = m - np.cos(kx) - np.cos(ky)
    h = (
        np.sin(kx)[..., None, None] * SIGMA_X
        + np.sin(ky)[..., None, None] * SIGMA_Y
        + dz[..., None, None] * SIGMA_Z
    )
    return HermitianField(grid, h)


def build_degree_map(
    grid: BrillouinGrid, m: float = 2.0, profile: Callable[[np.ndarray], np.ndarray] | None = None
) -> UnitaryField:
    """Q(k) = exp(i f(theta) n.sigma) from the unit four-vector
    (m - sum cos k_j, sin kx, sin ky, sin kz) = (cos theta, sin theta n).

    With the identity profile this is (d0 + i d.sigma) / |(d0, d)|, which
    has odd winding +1 for 1 < m < 3. ``profile`` must send 0 -> 0 and
    pi -> pi (or be identically 0) to keep the field continuous.
    """
    _require_dim(grid, 3, "degree map")
    kx, ky, kz = grid.momenta()
    d0 = m - np.cos(kx) - np.cos(ky) - np.cos(kz)
    d = np.stack([np.sin(kx), np.sin(ky), np.sin(kz)], axis=-1)
    r = np.sqrt(d0**2 + np.sum(d**2, axis=-1))
    if np.min(r) < CRITICAL_TOL:
        raise Gapless(f"degree map is singular at m = {m}")
    dnorm = np.linalg.norm(d, axis=-1)
    theta = np.arctan2(dnorm, d0)
    angle = theta if profile is None else np.asarray(profile(theta), dtype=float)
    # n is undefined where d = 0; there theta is 0 or pi and sin(angle) vanishes
    with np.errstate(invalid="ignore", divide="ignore"):
        n = np.where(dnorm[..., None] > 0, d / dnorm[..., None], 0.0)
    ndotsigma = n[..., 0, None, None] * SIGMA_X + n[..., 1, None, None] * SIGMA_Y + n[..., 2, None, None] * SIGMA_Z
    q = np.cos(angle)[..., None, None] * np.eye(2) + 1j * np.sin(angle)[..., None, None] * ndotsigma
    return UnitaryField(grid, q)


def build_random_gapped(seed: int, bands: int, gap: float, grid: BrillouinGrid) -> HermitianField:
    """Random Hermitian field with spectral gap >= gap.

    Uses numpy's PCG64 generator (``np.random.default_rng(seed)``), so the
    field is bit-identical for a given seed. Eigenvalues are +-(gap + |x|)
    with x standard normal, eigenvectors Haar-like from a QR decomposition.
    """
    if gap <= 0:
        raise InvalidInput(f"gap must be positive, got {gap}")
    rng = np.random.default_rng(seed)
    shape = grid.shape + (bands, bands)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (phases / np.abs(phases))[..., None, :]
    signs = rng.choice([-1.0, 1.0], size=grid.shape + (bands,))
    eig = signs * (gap + np.abs(rng.standard_normal(grid.shape + (bands,))))
    h = (q * eig[..., None, :]) @ dagger(q)
    return HermitianField(grid, 0.5 * (h + dagger(h)))


@dataclass(frozen=True)
class ModelInfo:
    dimension: int
    required: tuple[str, ...]
    defaults: dict = field(default_factory=dict)
    integer_params: tuple[str, ...] = ()


MODELS: dict[str, ModelInfo] = {
    "qn": ModelInfo(1, ("n",), integer_params=("n",)),
    "ssh": ModelInfo(1, ("t1", "t2")),
    "qwz": ModelInfo(2, ("m",)),
    "degree_map": ModelInfo(3, (), {"m": 2.0}),
    "random": ModelInfo(1, ("seed", "bands", "gap"), {"dimension": 1}, ("seed", "bands", "dimension")),
}


@dataclass(frozen=True)
class ModelSpec:
    name: str
    parameters: dict
    grid: BrillouinGrid

    def __post_init__(self):
        info = MODELS.get(self.name)
        if info is None:
            raise InvalidInput(f"unknown model {self.name!r}; choose from {sorted(MODELS)}")
        params = {**info.defaults, **self.parameters}
        missing = [p for p in info.required if p not in params]
        if missing:
            raise InvalidInput(f"model {self.name!r} needs parameters {missing}")
        unknown = sorted(set(params) - set(info.required) - set(info.defaults))
        if unknown:
            raise InvalidInput(f"model {self.name!r} does not take parameters {unknown}")
        for p in info.integer_params:
            if float(params[p]) != int(params[p]):
                raise InvalidInput(f"parameter {p!r} must be an integer, got {params[p]}")
        object.__setattr__(self, "parameters", params)
        if self.grid.dimension != model_dimension(self.name, params):
            raise InvalidInput(
                f"model {self.name!r} needs a d={model_dimension(self.name, params)} grid, got d={self.grid.dimension}"
            )


def model_dimension(name: str, parameters: dict | None = None) -> int:
    info = MODELS[name]
    if name == "random" and parameters:
        return int(parameters.get("dimension", 1))
    return info.dimension


def build(spec: ModelSpec) -> HermitianField:
    """Hamiltonian field for a registered model."""
    p, grid = spec.parameters, spec.grid
    if spec.name == "qn":
        return gamma_from_q(build_qn(int(p["n"]), grid))
    if spec.name == "ssh":
        return build_ssh(float(p["t1"]), float(p["t2"]), grid)
    if spec.name == "qwz":
        return build_qwz(float(p["m"]), grid)
    if spec.name == "degree_map":
        return gamma_from_q(build_degree_map(grid, float(p["m"])))
    if spec.name == "random":
        return build_random_gapped(int(p["seed"]), int(p["bands"]), float(p["gap"]), grid)
    raise InvalidInput(f"unknown model {spec.name!r}")
