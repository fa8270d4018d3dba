import numpy as np
import pytest
from scipy.stats import exponnorm

from tomokit import (PhaseSpaceGrid, QuadraticHamiltonianSymbol, StateSpec, Tomogram, WindowSpec,
                     build_state, homodyne_invert_to_density, homodyne_tomogram, invert_to_wigner,
                     quantum_quadric_tomogram, relative_l2, symplectic_tomogram, thick_invert_to_wigner,
                     thick_quadric_inverse, thick_quadric_tomogram, thick_radon_deconvolve_invert,
                     thick_radon_tomogram, thick_symplectic_tomogram, thicken, wigner)
from tomokit._fourier import product_params
from tomokit.exceptions import WindowNotInvertible, WindowNotInvertibleAtUnitFrequency
from tomokit.thick import thick_dequantizer_matrix, thick_quantizer_matrix

from conftest import vacuum_line

HARMONIC = QuadraticHamiltonianSymbol.from_matrix(np.eye(2))


def test_window_transforms_and_constants():
    for w in (WindowSpec.delta(), WindowSpec.gaussian(0.7), WindowSpec.rect(1.3)):
        assert abs(w.fourier(0.0) - 1) < 1e-12
    assert WindowSpec.delta().normalization_constant == 1.0
    assert WindowSpec.gaussian(0.4).normalization_constant == pytest.approx(np.exp(0.08), abs=1e-15)
    assert WindowSpec.gaussian(1.0).normalization_constant == pytest.approx(1.6487, abs=1e-4)
    with pytest.raises(WindowNotInvertibleAtUnitFrequency):
        WindowSpec.rect(2 * np.pi).normalization_constant
    assert WindowSpec.rect(2 * np.pi).transform_zeros(8.0) == pytest.approx(list(range(1, 9)))
    assert WindowSpec.rect(2 * np.pi).transform_zeros(0.999) == []
    with pytest.raises(ValueError):
        WindowSpec.gaussian(0.0)
    z = np.linspace(-4, 4, 8001)
    assert abs(np.trapezoid(WindowSpec.gaussian(0.5).value(z), z) - 1) < 1e-9


def test_thick_vacuum_closed_form_and_sigma_limit(grid256):
    W = wigner(StateSpec.vacuum(), grid256)
    X = np.linspace(-8, 8, 321)
    pts = np.array([[1.0, 0.0], [0.6, 0.8], [2.0, -1.0]])
    singular = np.array([vacuum_line(X, m, n) for m, n in pts])
    gaps = []
    for sigma in (0.5, 0.25, 0.125):
        t = thick_symplectic_tomogram(W, WindowSpec.gaussian(sigma), pts, X)
        exact = np.array([vacuum_line(X, m, n, sigma) for m, n in pts])
        assert np.max(np.abs(t.values - exact)) < 1e-6
        gaps.append(np.max(np.abs(t.values - singular)))
    assert gaps[0] > gaps[1] > gaps[2]


def test_thicken_identity_semigroup_and_closed_form(grid256):
    X = np.arange(-10, 10 + 1e-9, 0.01)
    t = symplectic_tomogram(wigner(StateSpec.vacuum(), grid256), [[1.0, 0.0], [1.0, 1.0]], X)
    assert np.array_equal(thicken(t, WindowSpec.delta()).values, t.values)
    first = thicken(t, WindowSpec.gaussian(0.3))
    twice = thicken(first._replace(first.values, window=None), WindowSpec.gaussian(0.4))
    once = thicken(t, WindowSpec.gaussian(0.5))
    assert np.max(np.abs(twice.values - once.values)) < 1e-6
    exact = np.array([vacuum_line(X, 1, 0, 0.5), vacuum_line(X, 1, 1, 0.5)])
    assert np.max(np.abs(once.values - exact)) < 1e-3
    direct = thick_symplectic_tomogram(wigner(StateSpec.vacuum(), grid256), WindowSpec.gaussian(0.5),
                                       [[1.0, 0.0], [1.0, 1.0]], X)
    assert np.max(np.abs(once.values - direct.values)) < 1e-3


def test_thick_wigner_round_trip_and_delta_path():
    grid = PhaseSpaceGrid.square(7.0, 128)
    out = PhaseSpaceGrid.square(6.0, 128)
    k = np.arange(-7.2, 7.2 + 1e-9, 0.4)
    pts = product_params(k, k)
    reach = 7.0 * np.sqrt(2) * 7.2
    X = np.arange(-reach, reach + 1e-9, 0.1)
    W = wigner(StateSpec.vacuum(), grid)
    singular = symplectic_tomogram(W, pts, X)
    thick = thicken(singular, WindowSpec.gaussian(0.5))
    rec = thick_invert_to_wigner(thick, out)
    assert relative_l2(rec.values, wigner(StateSpec.vacuum(), out).values) < 1e-2
    same = thick_invert_to_wigner(singular, out, window=WindowSpec.delta())
    assert np.array_equal(same.values, invert_to_wigner(singular, out).values)


def test_dequantizer_matrix():
    vac = build_state(StateSpec.vacuum(), 16).entries
    w = WindowSpec.gaussian(0.5)
    U = thick_dequantizer_matrix(w, 0.0, 1.0, 0.0, 16)
    assert np.trace(vac @ U).real == pytest.approx(0.4607, abs=1e-4)
    assert np.max(np.abs(U - U.conj().T)) < 1e-12
    coh = build_state(StateSpec.coherent(0.7 - 0.4j), 16).entries
    X = np.arange(-6, 6 + 1e-9, 0.1)
    vals = np.array([np.trace(coh @ thick_dequantizer_matrix(w, x, 0.6, 0.8, 16)).real for x in X])
    assert abs(np.sum(vals) * 0.1 - 1) < 1e-6
    grid = PhaseSpaceGrid.square(8.0, 256)
    t = thick_symplectic_tomogram(wigner(StateSpec.coherent(0.7 - 0.4j), grid), w, [[0.6, 0.8]], X)
    assert np.max(np.abs(vals - t.values[0])) < 1e-4


def test_quantizer_prefactor():
    D1 = thick_quantizer_matrix(WindowSpec.gaussian(1.0), 0.0, 0.0, 0.0, 6)
    np.testing.assert_allclose(D1, np.exp(0.5) / (2 * np.pi) * np.eye(7), atol=1e-12)
    D0 = thick_quantizer_matrix(WindowSpec.delta(), 0.0, 0.0, 0.0, 6)
    np.testing.assert_allclose(D0, np.eye(7) / (2 * np.pi), atol=1e-12)


def test_thick_quadric_profile_and_limits():
    X = np.arange(-2, 16 + 1e-9, 0.02)
    W = wigner(StateSpec.vacuum(), PhaseSpaceGrid.square(6.0, 512))
    t = thick_quadric_tomogram(W, HARMONIC, WindowSpec.gaussian(0.3), [[0, 0], [0.5, 1.0]], X)
    exact = exponnorm.pdf(X, 1 / (0.3 * 2.0), scale=0.3)
    assert np.max(np.abs(t.values[0] - exact)) < 1e-3
    np.testing.assert_allclose(t.normalization(), 1.0, atol=1e-6)
    narrow = thick_quadric_tomogram(W, HARMONIC, WindowSpec.gaussian(1e-3), [[0, 0]], X)
    singular = quantum_quadric_tomogram(W, HARMONIC, [[0, 0]], X)
    assert np.max(np.abs(narrow.values - singular.values)) < 1e-12


def test_thick_quadric_zero_inverse():
    al = np.arange(-2, 2 + 1e-9, 0.5)
    X = np.arange(0, 5, 0.1)
    pts = product_params(al, al)
    zero = Tomogram("quadric", X, pts, np.zeros((len(pts), X.size)), ("mu", "nu"),
                    window=WindowSpec.gaussian(0.3))
    out = thick_quadric_inverse(zero, HARMONIC, PhaseSpaceGrid.square(2.0, 16))
    assert np.all(out.values == 0)


def test_thick_radon_profiles(grid256):
    W = wigner(StateSpec.vacuum(), grid256)
    X = np.linspace(-8, 8, 321)
    theta = np.arange(8) * np.pi / 4
    h = thick_radon_tomogram(W, WindowSpec.gaussian(0.5), theta, X)
    assert np.max(np.abs(h.values - vacuum_line(X, 1, 0, 0.5))) < 1e-6
    singular = thick_radon_tomogram(W, WindowSpec.delta(), theta, X)
    assert np.array_equal(singular.values, homodyne_tomogram(W, theta, X).values)
    coh = thick_radon_tomogram(wigner(StateSpec.coherent(0.5 + 1j), grid256), WindowSpec.gaussian(0.5),
                               np.array([0.3, 0.3 + 2 * np.pi]), X)
    assert np.max(np.abs(coh.values[0] - coh.values[1])) < 1e-12


def test_deconvolution_paths(grid256):
    W = wigner(StateSpec.vacuum(), grid256)
    theta = np.arange(32) * np.pi / 32
    X = np.arange(-10, 10 + 1e-9, 0.02)
    h = homodyne_tomogram(W, theta, X)
    a = thick_radon_deconvolve_invert(h, 10, window=WindowSpec.delta())
    b = homodyne_invert_to_density(h, 10)
    assert np.array_equal(a.entries, b.entries)
    box = thick_radon_tomogram(W, WindowSpec.rect(2 * np.pi), theta, X)
    with pytest.raises(WindowNotInvertible) as info:
        thick_radon_deconvolve_invert(box, 10)
    assert 1.0 in info.value.offending_r
    assert "r = 1," in str(info.value)
