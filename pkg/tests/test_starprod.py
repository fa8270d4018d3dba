import numpy as np
import pytest

from tomokit import (DeformedPair, PhaseSpaceGrid, QuadricPair, StateSpec, Symbol,
                     ThickSymplecticPair, WindowSpec, build_state, dequantize, group_orbit_tomogram,
                     projection_defect, quantize, star_product, weak_duality_error)
from tomokit.exceptions import DimensionMismatch, TraceNotDecayed
from tomokit.states import quadrature_operators

from conftest import vacuum_line

STATES = [StateSpec.vacuum(), StateSpec.coherent(0.8), StateSpec.fock(1)]


@pytest.fixture(scope="module")
def pair():
    return ThickSymplecticPair(12, WindowSpec.gaussian(0.5), cutoff=8.0, count=40)


@pytest.fixture(scope="module")
def symbols(pair):
    return [dequantize(build_state(s, 12).entries, pair) for s in STATES]


def test_vacuum_symbol_is_the_thick_profile(pair, symbols):
    f = symbols[0]
    for i in (0, 123, 819, 1599):
        exact = vacuum_line(pair.X, pair.mu[i], pair.nu[i], 0.5)
        assert np.max(np.abs(f.values[i] - exact)) < 1e-6
    assert f.imag_max < 1e-9


def test_identity_symbol_integrates_to_dimension(pair):
    one = dequantize(np.eye(pair.dim), pair)
    # the outermost planes lose ~1e-6 of their tails past the X grid
    np.testing.assert_allclose(one.values.sum(axis=1).real * pair.dX, pair.dim, rtol=1e-5)


def test_linearity(pair, symbols):
    q, p = quadrature_operators(12)
    a, b = q[:13, :13], p[:13, :13]
    lhs = dequantize(a + 2 * b, pair).values
    rhs = dequantize(a, pair).values + 2 * dequantize(b, pair).values
    assert np.max(np.abs(lhs - rhs)) < 1e-12
    combo = quantize(symbols[0] + 0.5 * symbols[1])
    parts = quantize(symbols[0]) + 0.5 * quantize(symbols[1])
    assert np.max(np.abs(combo - parts)) < 1e-12
    zero = Symbol(pair, np.zeros_like(symbols[0].values))
    assert np.all(quantize(zero) == 0)


def test_weak_duality_projection_and_vacuum(pair, symbols):
    assert weak_duality_error(pair, STATES) < 1e-2
    vac = quantize(symbols[0])
    assert vac[0, 0].real > 0.99
    assert projection_defect(pair, build_state(StateSpec.coherent(0.8), 12).entries) < 1e-6


def test_degenerate_pair_has_unit_error(pair):
    class Silent(ThickSymplecticPair):
        def quantize(self, symbol):
            return np.zeros((self.dim, self.dim), complex)

    silent = Silent(4, WindowSpec.gaussian(0.5), cutoff=2.0, count=4)
    assert weak_duality_error(silent, [StateSpec.vacuum(), StateSpec.fock(1)]) == pytest.approx(1.0)


def test_star_product_algebra(pair, symbols):
    f, g, h = symbols
    left = star_product(star_product(f, g), h)
    right = star_product(f, star_product(g, h))
    assert np.max(np.abs(left.values - right.values)) < 1e-9
    unit = dequantize(np.eye(pair.dim), pair)
    assert np.max(np.abs(star_product(f, unit).values - f.values)) < 1e-3


def test_pair_mismatches(pair, symbols):
    other = ThickSymplecticPair(4, WindowSpec.gaussian(0.5), cutoff=2.0, count=4)
    with pytest.raises(DimensionMismatch):
        dequantize(np.eye(5), pair)
    with pytest.raises(DimensionMismatch):
        star_product(symbols[0], dequantize(np.eye(5), other))


def test_quadric_pair_constant_is_state_independent():
    qp = QuadricPair(12)
    w = 1.0
    assert qp.constant == pytest.approx(w / (2 * np.pi) * (2 * np.sin(0.5)) ** 2, rel=1e-12)
    spread, fits = qp.calibration_spread(STATES)
    assert spread < 1e-3
    np.testing.assert_allclose(fits, qp.constant, rtol=1e-3)


def test_deformed_pair_stops_at_the_wigner_level():
    grid = PhaseSpaceGrid.square(6.0, 64)
    dp = DeformedPair(6, grid, [1.0], [0.0, 0.5], np.arange(-6, 6, 0.1))
    f = dequantize(build_state(StateSpec.vacuum(), 6).entries, dp)
    assert f.values.shape == (2, 120)
    with pytest.raises(NotImplementedError):
        quantize(f)
    assert weak_duality_error(dp, STATES[:1]) == 1.0


def test_group_orbit_linear_and_scalar():
    X = np.arange(-6, 6 + 1e-9, 0.05)
    vac = build_state(StateSpec.vacuum(), 12)
    values, info = group_orbit_tomogram(vac, [1, 0, 0, 0, 0, 0], X, bin_average=False)
    assert np.max(np.abs(values - vacuum_line(X, 1, 0))) < 1e-6
    values, info = group_orbit_tomogram(vac, [0, 0, 0, 0, 0, 1.3], X)
    assert info["scalar"] and np.count_nonzero(values) == 1
    assert values[np.argmin(np.abs(X - 1.3))] * 0.05 == pytest.approx(1.0)


def test_group_orbit_preconditions():
    X = np.arange(-3, 3, 0.05)
    vac = build_state(StateSpec.vacuum(), 8)
    with pytest.raises(ValueError):
        group_orbit_tomogram(vac, [1, 0, 0, 0, 0, 0], X, t_grid=np.linspace(-5, 6, 64))
    # a harmonic generator has a periodic trace that never decays
    with pytest.raises(TraceNotDecayed):
        group_orbit_tomogram(vac, [0, 0, 0, 0.5, 0.5, 0], X, damping=False)
    _, info = group_orbit_tomogram(vac, [0, 0, 0, 0.5, 0.5, 0], X)
    assert info["damped"]
