import numpy as np
import pytest

from chiraltopo import ChiralOperator, build_qn, gamma_from_q, make_grid


@pytest.fixture
def line64():
    return make_grid(1, 64)


@pytest.fixture
def S1():
    return ChiralOperator.canonical(1)


def gamma_n(n, grid):
    return gamma_from_q(build_qn(n, grid))


def random_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def smooth_phase_gauge(rng, grid, terms=3):
    """exp(-i phi(k)) with phi a random periodic trig polynomial: winding 0."""
    (k,) = grid.momenta()
    phi = np.zeros_like(k)
    for j in range(1, terms + 1):
        a, b = rng.normal(scale=0.5, size=2)
        phi += a * np.cos(j * k) + b * np.sin(j * k)
    return np.exp(-1j * phi)
