import numpy as np
import pytest
from scipy.stats import poisson

from tomokit import PhaseSpaceGrid, StateSpec, build_state, wigner, wigner_analytic, wigner_from_density
from tomokit.exceptions import GridTooSmall
from tomokit.states import quadrature_density, quadrature_operators


def test_vacuum_and_fock_matrices():
    vac = build_state(StateSpec.vacuum(), 4).entries
    assert vac[0, 0] == 1 and np.count_nonzero(vac) == 1
    one = build_state(StateSpec.fock(1), 4).entries
    assert one[1, 1] == 1 and np.count_nonzero(one) == 1


def test_coherent_diagonal_is_renormalized_poisson():
    rho = build_state(StateSpec.coherent(0.8), 12).entries
    weights = poisson.pmf(np.arange(13), 0.64)
    np.testing.assert_allclose(np.diag(rho).real, weights / weights.sum(), atol=1e-14)
    assert abs(weights[0] - np.exp(-0.64)) < 1e-15


def test_quadrature_operator_entries():
    q, _ = quadrature_operators(1)
    assert q[0, 1] == pytest.approx(1 / np.sqrt(2)) and q[1, 0] == pytest.approx(1 / np.sqrt(2))
    _, p = quadrature_operators(2)
    assert p[0, 1] == pytest.approx(-1j / np.sqrt(2))
    assert p[1, 0] == pytest.approx(1j / np.sqrt(2))


def test_commutator_interior_block():
    q, p = quadrature_operators(10)
    c = q @ p - p @ q
    np.testing.assert_allclose(c[:10, :10], 1j * np.eye(10), atol=1e-12)


def test_wigner_vacuum_coherent_fock_values():
    g = PhaseSpaceGrid.square(6.0, 121)
    q, p = g.mesh()
    vac = wigner_from_density(build_state(StateSpec.vacuum(), 8), g).values
    np.testing.assert_allclose(vac, 2 * np.exp(-q ** 2 - p ** 2), atol=1e-12)
    one = wigner_from_density(build_state(StateSpec.fock(1), 8), g).values
    np.testing.assert_allclose(one, 2 * (2 * p ** 2 + 2 * q ** 2 - 1) * np.exp(-q ** 2 - p ** 2),
                               atol=1e-12)
    assert one[60, 60] == pytest.approx(-2.0)
    alpha = 0.7 - 0.4j
    coh = wigner_from_density(build_state(StateSpec.coherent(alpha), 30), g).values
    exact = 2 * np.exp(-(q - np.sqrt(2) * alpha.real) ** 2 - (p - np.sqrt(2) * alpha.imag) ** 2)
    np.testing.assert_allclose(coh, exact, atol=1e-9)


def test_analytic_matches_expansion_on_reference_grid(grid256):
    for spec in (StateSpec.vacuum(), StateSpec.coherent(1 + 0.5j)):
        a = wigner_analytic(spec, grid256).values
        b = wigner_from_density(build_state(spec, 20), grid256).values
        assert np.max(np.abs(a - b)) < 1e-6


def test_analytic_point_values():
    g = PhaseSpaceGrid.square(np.sqrt(2) * 4, 9)
    coh = wigner_analytic(StateSpec.coherent(1), g).values
    # grid points are multiples of sqrt(2); (q, p) = (sqrt(2), 0) is index (5, 4)
    assert coh[5, 4] == pytest.approx(2.0)
    vac = wigner_analytic(StateSpec.vacuum(), g).values
    np.testing.assert_array_equal(vac, wigner_analytic(StateSpec.coherent(0), g).values)


def test_normalization_and_linearity(grid256):
    specs = [StateSpec.vacuum(), StateSpec.coherent(1 + 0.5j), StateSpec.fock(1),
             StateSpec.thermal(0.5)]
    for s in specs:
        assert abs(wigner(s, grid256).integral() - 2 * np.pi) < 1e-3
    mix = StateSpec.mixture([(0.3, StateSpec.vacuum()), (0.7, StateSpec.fock(1))])
    lhs = wigner(mix, grid256).values
    rhs = 0.3 * wigner(StateSpec.vacuum(), grid256, 10).values \
        + 0.7 * wigner(StateSpec.fock(1), grid256).values
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_quadrature_density_of_vacuum():
    x = np.linspace(-4, 4, 41)
    rho = build_state(StateSpec.vacuum(), 6).entries
    np.testing.assert_allclose(quadrature_density(rho, x, 0.3), np.exp(-x ** 2) / np.sqrt(np.pi),
                               atol=1e-14)


def test_small_grid_is_refused():
    with pytest.raises(GridTooSmall):
        wigner_from_density(build_state(StateSpec.fock(3), 8), PhaseSpaceGrid.square(2.0, 32))


def test_statespec_dict_round_trip():
    spec = StateSpec.mixture([(0.5, StateSpec.coherent(1 + 2j)), (0.5, StateSpec.thermal(0.2))])
    assert StateSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(ValueError):
        StateSpec.from_dict({"kind": "squeezed"})
