"""Acceptance suite: one PASS/FAIL line per criterion, printed at the end of the module.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
Expensive round trips are cached so the convergence criterion reuses them.
"""

import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from tomokit import (Axis, ClassicalField, PhaseSpaceGrid, QuadraticHamiltonianSymbol, QuadricSpec,
                     StateSpec, ThickSymplecticPair, WindowSpec, build_state, com_tomogram,
                     commutator_check,
                     deformed_quantum_tomogram, deformed_radon, deformed_radon_inverse,
                     estimate_inverse_constant, homodyne_invert_to_density, homodyne_tomogram,
                     invert_to_density, invert_to_wigner, multipartite_quadric_tomogram,
                     quadric_inverse, quadric_tomogram,
                     quantum_quadric_inverse, quantum_quadric_tomogram, relative_l2,
                     symplectic_tomogram, thick_quadric_inverse, thick_quadric_tomogram,
                     thick_radon_tomogram, thick_symplectic_tomogram, thicken, two_mode_tomogram,
                     weak_duality_error, wigner)
from tomokit._fourier import product_params
from tomokit.verify import group_orbit, homogeneity, thick_radon_contrast

RESULTS = {}
HARMONIC = QuadraticHamiltonianSymbol.from_matrix(np.eye(2))
ROUND_TRIP_STATES = (StateSpec.vacuum(), StateSpec.coherent(1 + 0.5j), StateSpec.fock(1))
QUADRIC_STATES = (StateSpec.vacuum(), StateSpec.coherent(1.0), StateSpec.fock(1))


def label(spec):
    if spec.kind == "coherent":
        return f"coherent({spec.alpha.real:g}{spec.alpha.imag:+g}i)" if spec.alpha.imag else \
            f"coherent({spec.alpha.real:g})"
    return f"fock({spec.n})" if spec.kind == "fock" else spec.kind


def record(number, title, items):
    """Store and print one line; ``items`` are ``(name, value, bound, ok)`` tuples."""
    passed = all(ok for *_, ok in items)
    parts = "; ".join(f"{name} {value:{'.6g' if bound >= 0.5 else '.3g'}} (bound {bound:g})"
                      f"{'' if ok else ' FAIL'}" for name, value, bound, ok in items)
    line = f"criterion {number:2d}  {'PASS' if passed else 'FAIL'}  {title}: {parts}"
    RESULTS[number] = line
    print(line)
    return passed


def below(name, value, bound):
    return (name, float(value), bound, bool(value < bound))


def above(name, value, bound):
    return (name, float(value), bound, bool(value > bound))


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    reporter = request.config.pluginmanager.getplugin("terminalreporter")
    if reporter is not None:
        reporter.write_line("")
        for n in sorted(RESULTS):
            reporter.write_line(RESULTS[n])


# cached round trips -------------------------------------------------------------------

@lru_cache(maxsize=None)
def symplectic_round_trip(count):
    """L2 errors and seconds per state; Wigner on [-7, 7]^2 with ``count`` points, output 128^2."""
    grid = PhaseSpaceGrid.square(7.0, count)
    out = PhaseSpaceGrid.square(6.0, 128)
    k = np.arange(-7.2, 7.2 + 1e-9, 0.4)
    reach = 7.0 * np.sqrt(2.0) * 7.2
    X = np.arange(-reach, reach + 1e-9, 0.1)
    result = {}
    for spec in ROUND_TRIP_STATES:
        start = time.perf_counter()
        rec = invert_to_wigner(symplectic_tomogram(wigner(spec, grid), product_params(k, k), X), out)
        result[label(spec)] = (relative_l2(rec.values, wigner(spec, out).values),
                               time.perf_counter() - start)
    return result


QUADRIC_OUT = PhaseSpaceGrid.square(6.0, 96)


@lru_cache(maxsize=None)
def quadric_tomograms(count):
    grid = PhaseSpaceGrid.square(6.5, count)
    a = np.arange(-7.0, 7.0 + 1e-9, 0.4)
    X = np.arange(-3.0, 0.5 * (6.5 + 7.0 * np.sqrt(2.0)) ** 2 + 3.0, 0.1)
    return {label(s): quantum_quadric_tomogram(wigner(s, grid), HARMONIC, product_params(a, a), X)
            for s in QUADRIC_STATES}


@lru_cache(maxsize=None)
def quadric_round_trip(count):
    out = {}
    for spec in QUADRIC_STATES:
        t = quadric_tomograms(count)[label(spec)]
        rec = quantum_quadric_inverse(t, HARMONIC, QUADRIC_OUT)
        out[label(spec)] = relative_l2(rec.values, wigner(spec, QUADRIC_OUT).values)
    return out


@lru_cache(maxsize=None)
def thick_quadric_round_trip(count, sigma=0.3):
    out = {}
    for spec in QUADRIC_STATES[:2]:
        # same computation as thick_quadric_tomogram: the singular profile convolved in X
        t = thicken(quadric_tomograms(count)[label(spec)], WindowSpec.gaussian(sigma))
        rec = thick_quadric_inverse(t, HARMONIC, QUADRIC_OUT)
        out[label(spec)] = relative_l2(rec.values, wigner(spec, QUADRIC_OUT).values)
    return out


@lru_cache(maxsize=None)
def classical_round_trip(count):
    grid = PhaseSpaceGrid.square(6.0, count)
    q, p = grid.mesh()
    f = ClassicalField(grid, np.exp(-q ** 2 - p ** 2) / np.pi)
    Q = QuadricSpec(B=0.5 * np.eye(2))
    a = np.arange(-8.0, 8.0 + 1e-9, 0.3)
    X = np.arange(-1.0, 0.5 * (5.0 + 8.0 * np.sqrt(2.0)) ** 2, 0.05)
    out = PhaseSpaceGrid.square(4.0, 128)
    rec = quadric_inverse(quadric_tomogram(f, Q, product_params(a, a), X), Q, out)
    qo, po = out.mesh()
    return relative_l2(rec.values, np.exp(-qo ** 2 - po ** 2) / np.pi)


@lru_cache(maxsize=None)
def deformed_round_trip(count):
    """Off-axis Gaussian at (2, 1); errors outside the |q| < 0.25 mask."""
    grid = PhaseSpaceGrid((Axis(-3.0, 7.0, count), Axis(-4.0, 6.0, count)))
    q, p = grid.mesh()
    f = ClassicalField(grid, np.exp(-(q - 2) ** 2 - (p - 1) ** 2) / np.pi)
    mu = np.arange(-24.0, 24.0 + 1e-9, 0.5)
    nu = np.arange(-9.0, 9.0 + 1e-9, 0.25)
    reach = 24.0 * 5.7 + 9.0 * 27.0
    X = np.arange(-reach, reach + 1e-9, 0.1)
    out = PhaseSpaceGrid((Axis(-2.0, 6.0, 129), Axis(-3.0, 5.0, 129)))
    rec = deformed_radon_inverse(deformed_radon(f, mu, nu, X), out)
    qo, po = out.mesh()
    keep = ~rec.mask
    return relative_l2(rec.values[keep], (np.exp(-(qo - 2) ** 2 - (po - 1) ** 2) / np.pi)[keep])


# criteria -----------------------------------------------------------------------------

def gaussian_line_density(X, mu, nu, sigma, alpha=0j):
    v = mu * mu + nu * nu + 2.0 * sigma ** 2
    mean = np.sqrt(2.0) * (mu * alpha.real + nu * alpha.imag)
    return np.exp(-(X - mean) ** 2 / v) / np.sqrt(np.pi * v)


def test_criterion_01_gaussian_closed_forms():
    grid = PhaseSpaceGrid.square(8.0, 256)
    X = np.linspace(-8.0, 8.0, 321)
    points = np.array([[1.0, 0.0], [0.0, 1.0], [0.6, -0.8], [2.0, 1.0], [0.3, 0.2], [-1.5, 0.5]])
    items = []
    for spec, alpha in ((StateSpec.vacuum(), 0j), (StateSpec.coherent(1 + 0.5j), 1 + 0.5j)):
        start = time.perf_counter()
        t = thick_symplectic_tomogram(wigner(spec, grid), WindowSpec.gaussian(0.5), points, X)
        seconds = time.perf_counter() - start
        exact = np.array([gaussian_line_density(X, m, n, 0.5, alpha) for m, n in points])
        keep = exact > 1e-6 * exact.max()
        items.append(below(f"{label(spec)} max rel err", np.max(np.abs(t.values - exact)[keep]
                                                                 / exact[keep]), 1e-5))
        items.append(below(f"{label(spec)} seconds", seconds, 10.0))
    assert record(1, "thick Gaussian closed forms, sigma=0.5, 256^2", items)


def test_criterion_02_homogeneity():
    checks = homogeneity()
    worst = max(c.value for c in checks)
    assert record(2, "homogeneity over r in {0.5,1,2,5}, theta in {0,pi/4,pi/2}",
                  [below(f"worst of {len(checks)}", worst, 1e-10)])


def test_criterion_03_wigner_round_trip():
    res = symplectic_round_trip(128)
    items = []
    for name, (err, seconds) in res.items():
        items.append(below(f"{name} L2", err, 1e-2))
        items.append(below(f"{name} s", seconds, 60.0))
    assert record(3, "Wigner round trip, 128^2 output", items)


def test_criterion_04_density_routes():
    spec = StateSpec.coherent(0.8)
    truth = build_state(spec, 12)
    W = wigner(spec, PhaseSpaceGrid.square(6.0, 256))
    k = np.arange(-7.2, 7.2 + 1e-9, 0.4)
    plane = invert_to_density(symplectic_tomogram(W, product_params(k, k),
                                                  np.arange(-61.1, 61.1 + 1e-9, 0.05)), 12)
    theta = np.arange(32) * np.pi / 32
    polar = homodyne_invert_to_density(
        homodyne_tomogram(W, theta, np.arange(-10.0, 10.0 + 1e-9, 0.02)), 12)
    assert record(4, "coherent(0.8) density, n_max=12",
                  [above("plane fidelity", plane.fidelity(truth), 0.999),
                   above("polar fidelity", polar.fidelity(truth), 0.999),
                   below("route difference", np.max(np.abs(plane.entries - polar.entries)), 1e-3)])


def test_criterion_05_quadric_tomogram():
    X = np.arange(-0.5, 10.0 + 1e-9, 0.02)
    W = wigner(StateSpec.vacuum(), PhaseSpaceGrid.square(6.0, 512))
    t = quantum_quadric_tomogram(W, HARMONIC, [[0.0, 0.0]], X)
    a, b = np.clip(X - 0.01, 0, None), np.clip(X + 0.01, 0, None)
    polar = (np.exp(-2 * a) - np.exp(-2 * b)) / 0.02
    items = [below("polar profile max err", np.max(np.abs(t.values[0] - polar)), 1e-3)]
    tomos = quadric_tomograms(128)
    refs = [wigner(s, QUADRIC_OUT).values for s in QUADRIC_STATES]
    fits = estimate_inverse_constant([tomos[label(s)] for s in QUADRIC_STATES], refs, HARMONIC,
                                     QUADRIC_OUT)
    baked = HARMONIC.inverse_constant()
    items.append(below("prefactor spread", (fits.max() - fits.min()) / fits.mean(), 1e-3))
    items.append(below("fit vs baked prefactor", np.max(np.abs(fits / baked - 1)), 1e-2))
    for name, err in quadric_round_trip(128).items():
        items.append(below(f"{name} L2", err, 1e-2))
    assert record(5, "quadric B=I: polar oracle and round trip", items)


def test_criterion_06_thick_quadric_round_trip():
    items = [below(f"{name} L2", err, 1e-2) for name, err in thick_quadric_round_trip(128).items()]
    assert record(6, "thick quadric round trip, sigma=0.3, B=I", items)


def test_criterion_07_classical_and_deformed():
    assert record(7, "classical quadric and deformed round trips",
                  [below("classical quadric L2", classical_round_trip(128), 1e-2),
                   below("deformed L2 (|q|>=0.25)", deformed_round_trip(64), 5e-2)])


def test_criterion_08_thick_radon_contrast():
    gauss, box = thick_radon_contrast()
    assert record(8, "thick Radon: gaussian inverts, rect w=2pi refused at r=1",
                  [above("gaussian fidelity", gauss.value, 0.99),
                   ("rect refused naming r=1", box.value, 1.0, box.passed)])


def test_criterion_09_group_orbit():
    checks = group_orbit()
    items = []
    for c in checks:
        if c.name.startswith("group orbit vs direct"):
            items.append(below(c.name.replace("group orbit vs direct tomogram, ", "linear, "),
                               c.value, 1e-6))
        elif c.name.startswith("scalar"):
            items.append(below("scalar generator mass outside one bin", c.value, 1e-12))
        else:
            items.append(below(c.name.replace("quadratic orbit vs ", "quadratic vs "), c.value, 5e-2))
    assert record(9, "group-orbit tomograms", items)


def test_criterion_10_probability_property():
    grid = PhaseSpaceGrid.square(8.0, 192)
    states = [StateSpec.vacuum(), StateSpec.coherent(1 + 0.5j), StateSpec.fock(1), StateSpec.fock(3),
              StateSpec.thermal(0.5),
              StateSpec.mixture([(0.3, StateSpec.fock(2)), (0.7, StateSpec.coherent(-0.8j))])]
    lines = np.array([[1.0, 0.0], [0.0, 1.0], [0.6, -0.8], [2.0, 1.0], [0.3, 0.2]])
    theta = np.arange(8) * np.pi / 8
    Xl = np.arange(-16.0, 16.0 + 1e-9, 0.02)
    Xq = np.arange(-2.0, 40.0 + 1e-9, 0.02)
    shifts = np.array([[0.0, 0.0], [1.0, -0.5], [-1.5, 1.0]])
    families = {
        "symplectic": lambda W: symplectic_tomogram(W, lines, Xl),
        "homodyne": lambda W: homodyne_tomogram(W, theta, Xl),
        "quadric": lambda W: quantum_quadric_tomogram(W, HARMONIC, shifts, Xq),
        "deformed": lambda W: deformed_quantum_tomogram(W, [1.0, -0.5], [0.0, 0.5], Xl),
        "thick symplectic": lambda W: thick_symplectic_tomogram(W, WindowSpec.gaussian(0.5),
                                                                lines, Xl),
        "thick homodyne": lambda W: thick_radon_tomogram(W, WindowSpec.rect(1.0), theta, Xl),
        "thick quadric": lambda W: thick_quadric_tomogram(W, HARMONIC, WindowSpec.gaussian(0.3),
                                                          shifts, Xq),
    }
    low = {k: 0.0 for k in families}
    norm = {k: 0.0 for k in families}
    for spec in states:
        W = wigner(spec, grid)
        for name, make in families.items():
            t = make(W)
            low[name] = min(low[name], float(t.values.min()))
            norm[name] = max(norm[name], float(np.max(np.abs(t.normalization() - 1.0))))
    pair = (StateSpec.fock(1), StateSpec.coherent(0.5))
    W2 = wigner(pair, PhaseSpaceGrid.square(6.0, 40, modes=2))
    rows = np.array([[1.0, 0.0, 1.0, 0.0], [0.6, 0.8, 0.5, -0.5]])
    X2 = np.arange(-6.0, 6.0 + 1e-9, 0.1)
    Xb = np.arange(-0.25, 30.0, 0.5)
    two_mode = {
        "two-mode symplectic": two_mode_tomogram(W2, rows, X2, X2),
        "center of mass": com_tomogram(W2, rows, np.arange(-9.0, 9.0 + 1e-9, 0.05)),
        "bipartite quadric": multipartite_quadric_tomogram(W2, (HARMONIC, HARMONIC),
                                                           [[0, 0, 0, 0], [1, 0, 0, -1]], Xb, Xb),
    }
    for name, t in two_mode.items():
        low[name] = float(t.values.min())
        norm[name] = float(np.max(np.abs(t.normalization() - 1.0)))
    items = []
    for name in low:
        items.append((f"{name} min", low[name], -1e-9, low[name] >= -1e-9))
        items.append(below(f"{name} |1-norm|", norm[name], 1e-3))
    assert record(10, f"nonnegativity and normalization, {len(states)} states and one two-mode product", items)


def test_criterion_11_star_product():
    states = [StateSpec.vacuum(), StateSpec.coherent(0.8), StateSpec.fock(1)]
    pair = ThickSymplecticPair(12, WindowSpec.gaussian(0.5), cutoff=8.0, count=40)
    big = ThickSymplecticPair(16, WindowSpec.gaussian(0.5), cutoff=10.0, count=50)
    assert record(11, "thick-symplectic pair, sigma=0.5",
                  [below("weak duality (n_max=12)", weak_duality_error(pair, states), 1e-2),
                   below("commutator vs i (n_max=16)", commutator_check(big), 1e-2)])


def test_criterion_12_convergence():
    items = []
    coarse, fine = symplectic_round_trip(64), symplectic_round_trip(128)
    for name in fine:
        items.append(above(f"c3 {name} 64->128", coarse[name][0] / fine[name][0], 2.0))
    coarse, fine = quadric_round_trip(128), quadric_round_trip(256)
    for name in fine:
        items.append(above(f"c5 {name} 128->256", coarse[name] / fine[name], 2.0))
    coarse, fine = thick_quadric_round_trip(128), thick_quadric_round_trip(256)
    for name in fine:
        items.append(above(f"c6 {name} 128->256", coarse[name] / fine[name], 2.0))
    items.append(above("c7 classical 64->128", classical_round_trip(64) / classical_round_trip(128),
                       2.0))
    items.append(above("c7 deformed 64->128", deformed_round_trip(64) / deformed_round_trip(128),
                       2.0))
    assert record(12, "error ratio under one grid doubling", items)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
