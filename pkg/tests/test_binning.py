import numpy as np
from scipy.special import erf

from tomokit import PhaseSpaceGrid, StateSpec, wigner
from tomokit._binning import LevelSetBinner, bin_layout, histogram, spreading_matrix


def linear(mu, nu):
    return lambda pts: (pts @ np.array([mu, nu]), np.tile([mu, nu], (len(pts), 1)))


def test_point_masses_on_bin_edges_go_down():
    h = histogram([0.0, 0.5, 1.0], 1.0, 0.0, 0.0, -0.5, 0.5, 4)
    # bins (-0.5,0], (0,0.5], (0.5,1], (1,1.5]
    np.testing.assert_array_equal(h, [1.0, 1.0, 1.0, 0.0])
    h = histogram([-0.25, 0.3, 1.25], 1.0, 0.0, 0.0, -0.5, 0.5, 4)
    np.testing.assert_array_equal(h, [1.0, 1.0, 0.0, 1.0])


def test_spread_conserves_mass():
    c = np.linspace(-1, 1, 7)
    S = spreading_matrix(c, 0.3, 0.1, -3.0, 0.1, 60)
    np.testing.assert_allclose(np.asarray(S.sum(axis=1)).ravel(), 1.0, atol=1e-13)


def line_errors(n):
    g = PhaseSpaceGrid.square(8.0, n)
    density = wigner(StateSpec.vacuum(), g).values / (2 * np.pi)
    X = np.arange(-6, 6 + 1e-9, 0.02)
    binner = LevelSetBinner(density, g)
    errs = []
    for mu, nu in ((1.0, 0.0), (1.0, 1.0), (0.3, -0.8)):
        s = np.sqrt(mu * mu + nu * nu)
        exact = 0.5 * (erf((X + 0.01) / s) - erf((X - 0.01) / s)) / 0.02
        errs.append(np.max(np.abs(binner.marginal(linear(mu, nu), X) - exact)))
    return np.array(errs)


def test_linear_marginal_converges_at_second_order():
    # the tent interpolant's projection differs from the Gaussian by O(h^2)
    coarse, fine = line_errors(128), line_errors(256)
    assert np.all(fine < 1e-3)
    assert np.all(coarse / fine > 3.5)


def test_spreading_reproduces_marginal():
    g = PhaseSpaceGrid.square(6.0, 64)
    density = wigner(StateSpec.coherent(0.5), g).values / (2 * np.pi)
    X = np.arange(-5, 5 + 1e-9, 0.1)
    _, dx, _ = bin_layout(X)
    direct = LevelSetBinner(density, g).marginal(linear(0.6, 0.8), X)
    S = LevelSetBinner(None, g).spreading(linear(0.6, 0.8), X)
    via = S.T @ (density.ravel() * g.cell_volume) / dx
    np.testing.assert_allclose(via, direct, atol=1e-13)
