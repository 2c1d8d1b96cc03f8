import numpy as np
import pytest
from conftest import gamma_n, smooth_phase_gauge

from chiraltopo import (
    ChiralOperator,
    HermitianField,
    UnitaryField,
    build_degree_map,
    build_qn,
    build_qwz,
    chern_number,
    extract_q,
    flatten,
    gamma_from_q,
    gauge_transform,
    make_grid,
    relative_winding,
    valence_projection,
    winding3,
    winding_number,
)
from chiraltopo.errors import GridTooCoarse, NotProjection, SingularLink, WrongDimension
from chiraltopo.invariants import InvariantKind, plaquette_flux, unwrapped_phase

# Frozen from tests/oracles/compute_oracles.py (512^2 plaquette loop, lower band).
QWZ_CHERN_ORACLE = {-3.0: 0, -1.0: -1, 1.0: 1, 3.0: 0}
# Frozen from the same script (96^3 analytic-derivative trace form, m = 2).
DEGREE_MAP_ORACLE = 1


@pytest.mark.parametrize("n", [-3, 0, 3, 7])
def test_winding_of_qn(line64, n):
    r = winding_number(build_qn(n, line64))
    assert r.kind is InvariantKind.WINDING1
    assert r.value == n and r.residual < 1e-9 and r.grid_L == 64


def test_winding_of_constant(line64):
    assert winding_number(UnitaryField.identity(line64, 3)).value == 0


def test_winding_multiplies_through_det(line64):
    Q = build_qn(2, line64).direct_sum(build_qn(-1, line64))
    assert winding_number(Q).value == 1


def test_winding_too_coarse():
    with pytest.raises(GridTooCoarse):
        winding_number(build_qn(4, make_grid(1, 8)))


def test_winding_wrong_dimension():
    with pytest.raises(WrongDimension):
        winding_number(UnitaryField.identity(make_grid(2, 4)))


def test_unwrapped_phase_is_linear_for_qn(line64):
    k, phase = unwrapped_phase(build_qn(2, line64))
    np.testing.assert_allclose(phase, -2 * k, atol=1e-12)


def test_homotopy_invariance_sampled(line64):
    rng = np.random.default_rng(11)
    q0 = build_qn(2, line64).values
    q1 = q0 * smooth_phase_gauge(rng, line64)[:, None, None]
    for t in np.linspace(0, 1, 21):
        z = (1 - t) * q0 + t * q1
        assert np.min(np.abs(z)) > 1e-3
        assert winding_number(UnitaryField(line64, z / np.abs(z))).value == 2


def test_homotopy_invariance_rank2(line64):
    rng = np.random.default_rng(12)
    a = build_qn(1, line64).direct_sum(build_qn(-3, line64)).values
    g = np.exp(1j * 0.3 * rng.standard_normal((2, 2)))
    b = a @ (g @ g.conj().T / np.linalg.norm(g @ g.conj().T, 2))
    for t in np.linspace(0, 1, 11):
        u, s, vh = np.linalg.svd((1 - t) * a + t * b)
        assert s.min() > 1e-3
        assert winding_number(UnitaryField(line64, u @ vh)).value == -2


@pytest.mark.parametrize("m, expected", sorted(QWZ_CHERN_ORACLE.items()))
def test_qwz_chern_matches_oracle(m, expected):
    P = valence_projection(flatten(build_qwz(m, make_grid(2, 64))))
    r = chern_number(P)
    assert r.value == expected and r.residual < 1e-12


@pytest.mark.parametrize("m, expected", [(-2.1, 0), (-1.9, -1), (-0.1, -1), (0.1, 1), (1.9, 1), (2.1, 0)])
def test_qwz_chern_changes_only_at_critical_points(m, expected):
    P = valence_projection(flatten(build_qwz(m, make_grid(2, 64))))
    assert chern_number(P).value == expected


def test_chern_of_constant_projection():
    grid = make_grid(2, 16)
    P = HermitianField(grid, np.broadcast_to(np.diag([1.0, 0.0]), grid.shape + (2, 2)))
    r = chern_number(P)
    assert r.value == 0 and r.residual == 0.0


def test_chern_exact_on_coarse_grid():
    P = valence_projection(flatten(build_qwz(1.0, make_grid(2, 6))))
    r = chern_number(P)
    assert r.value == 1 and r.residual < 1e-12


def test_plaquette_flux_sums_to_two_pi():
    flux = plaquette_flux(valence_projection(flatten(build_qwz(-1.0, make_grid(2, 32)))))
    assert flux.sum() == pytest.approx(-2 * np.pi, abs=1e-10)


def test_chern_singular_link():
    grid = make_grid(2, 4)
    vals = np.zeros(grid.shape + (2, 2))
    vals[0::2, :, 0, 0] = 1
    vals[1::2, :, 1, 1] = 1
    with pytest.raises(SingularLink):
        chern_number(HermitianField(grid, vals))


def test_chern_rejects_non_projection():
    grid = make_grid(2, 4)
    with pytest.raises(NotProjection):
        chern_number(HermitianField(grid, np.broadcast_to(np.diag([2.0, 0.0]), grid.shape + (2, 2))))


def test_chern_wrong_dimension(line64):
    with pytest.raises(WrongDimension):
        chern_number(valence_projection(gamma_n(1, line64)))


@pytest.fixture(scope="module")
def cube32():
    return make_grid(3, 32)


def test_winding3_degree_map(cube32):
    r = winding3(build_degree_map(cube32))
    assert r.value == DEGREE_MAP_ORACLE and r.residual < 1e-2


def test_winding3_constant_is_zero():
    r = winding3(UnitaryField.identity(make_grid(3, 8), 2))
    assert r.value == 0 and r.residual < 1e-10


def test_winding3_single_axis_is_zero():
    grid = make_grid(3, 16)
    kx, _, _ = grid.momenta()
    q = np.exp(-2j * kx)[..., None, None] * np.eye(2)
    r = winding3(UnitaryField(grid, q))
    assert r.value == 0 and r.residual < 1e-10


def test_winding3_zero_profile():
    grid = make_grid(3, 12)
    Q = build_degree_map(grid, profile=lambda th: np.zeros_like(th))
    assert np.array_equal(Q.values, np.broadcast_to(np.eye(2), grid.shape + (2, 2)))
    assert winding3(Q).residual < 1e-10


def test_winding3_direct_sum_with_constant(cube32):
    Q = build_degree_map(cube32)
    padded = Q.direct_sum(UnitaryField.identity(cube32, 2))
    assert winding3(padded).raw_value == pytest.approx(winding3(Q).raw_value, abs=1e-12)


def test_winding3_trivial_phase():
    r = winding3(build_degree_map(make_grid(3, 24), m=4.0))
    assert r.value == 0 and r.residual < 1e-2


def test_winding3_three_point_stencil_is_second_order(cube32):
    raw2 = winding3(build_degree_map(cube32), order=2).raw_value
    raw4 = winding3(build_degree_map(cube32), order=4).raw_value
    assert abs(raw4 - 1) < abs(raw2 - 1)


def test_relative_winding_examples(line64, S1):
    assert relative_winding(gamma_n(2, line64), gamma_n(5, line64), S1).value == 3
    g = gamma_n(4, line64)
    assert relative_winding(g, g, S1).value == 0
    q7 = build_qn(7, line64)
    a = gauge_transform(gamma_n(2, line64), q7)
    b = gauge_transform(gamma_n(5, line64), q7)
    assert winding_number(extract_q(a, S1)).value == 9
    assert relative_winding(a, b, S1).value == 3


@pytest.mark.parametrize("a, b, c", [(0, 2, 5), (-3, 4, 1), (2, -2, 0)])
def test_relative_winding_path_independence_and_inverse(line64, S1, a, b, c):
    ga, gb, gc = (gamma_n(n, line64) for n in (a, b, c))
    ab = relative_winding(ga, gb, S1).value
    bc = relative_winding(gb, gc, S1).value
    assert relative_winding(ga, gc, S1).value == ab + bc
    assert relative_winding(gb, ga, S1).value == -ab


def test_relative_winding_common_smooth_gauge(line64, S1):
    rng = np.random.default_rng(5)
    G = UnitaryField(line64, (smooth_phase_gauge(rng, line64) * np.exp(-3j * line64.axis()))[:, None, None])
    ga, gb = gamma_n(-1, line64), gamma_n(2, line64)
    assert relative_winding(gauge_transform(ga, G), gauge_transform(gb, G), S1).value == 3


@pytest.mark.parametrize("m, n", [(1, 2), (-3, 5), (0, 0)])
def test_winding_additive_under_direct_sum(line64, m, n):
    Q = build_qn(m, line64).direct_sum(build_qn(n, line64))
    assert winding_number(Q).value == m + n
    S = ChiralOperator.canonical(2)
    assert winding_number(extract_q(gamma_from_q(Q), S)).value == m + n
