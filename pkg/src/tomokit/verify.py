"""Named self-check suites run by ``tomokit verify``.

Each suite returns a list of :class:`Check` records; closed forms come from
Gaussian algebra (coherent-state tomograms are normal distributions) and the
states' own density matrices.
"""

import time
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter1d

from ._fourier import product_params
from .exceptions import WindowNotInvertible
from .grids import PhaseSpaceGrid, relative_l2
from .quadric import QuadraticHamiltonianSymbol, quantum_quadric_tomogram
from .starprod import (QuadricPair, ThickSymplecticPair, commutator_check, group_orbit_tomogram,
                       projection_defect, weak_duality_error)
from .states import StateSpec, build_state, wigner
from .symplectic import (homodyne_from_symplectic, invert_to_density, invert_to_wigner,
                         homodyne_invert_to_density, homodyne_tomogram, symplectic_tomogram,
                         symplectic_tomogram_from_density)
from .thick import (WindowSpec, gaussian_thick_tomogram, thick_radon_deconvolve_invert,
                    thick_radon_tomogram, thick_symplectic_tomogram)


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    seconds: float = 0.0
    note: str = ""

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.note})" if self.note else ""
        return f"{mark}  {self.name}: {self.value:.3e} (tol {self.tolerance:.4g}){extra}"

    def to_dict(self):
        return {"name": self.name, "value": float(self.value), "tolerance": float(self.tolerance),
                "passed": bool(self.passed), "seconds": round(self.seconds, 3), "note": self.note}


def _below(name, value, tol, start, note=""):
    return Check(name, float(value), tol, bool(value < tol), time.perf_counter() - start, note)


GAUSSIAN_POINTS = np.array([[1.0, 0.0], [0.0, 1.0], [0.6, -0.8], [2.0, 1.0], [0.3, 0.2],
                            [-1.5, 0.5]])


def gaussians(sigma=0.5):
    """Thick symplectic tomograms of vacuum and coherent(1+0.5i) against the closed form."""
    grid = PhaseSpaceGrid.square(8.0, 256)
    X = np.linspace(-8.0, 8.0, 321)
    checks = []
    for spec, alpha in ((StateSpec.vacuum(), 0j), (StateSpec.coherent(1 + 0.5j), 1 + 0.5j)):
        start = time.perf_counter()
        t = thick_symplectic_tomogram(wigner(spec, grid), WindowSpec.gaussian(sigma),
                                      GAUSSIAN_POINTS, X)
        exact = gaussian_thick_tomogram(alpha, GAUSSIAN_POINTS, X, sigma).values
        keep = exact > 1e-6 * exact.max()
        err = np.max(np.abs(t.values - exact)[keep] / exact[keep])
        checks.append(_below(f"gaussian closed form, {spec.kind}, sigma={sigma}", err, 1e-5, start))
    return checks


def homogeneity():
    """``W(X, r cos, r sin) = R(X / r, theta) / r`` on closed-form coherent tomograms."""
    alpha = 1 + 0.5j
    X = np.linspace(-20.0, 20.0, 801)
    checks = []
    for r in (0.5, 1.0, 2.0, 5.0):
        for theta in (0.0, np.pi / 4, np.pi / 2):
            start = time.perf_counter()
            t = gaussian_thick_tomogram(alpha, [[r * np.cos(theta), r * np.sin(theta)]], X)
            x, scaled = homodyne_from_symplectic(t, r, theta)
            direct = gaussian_thick_tomogram(alpha, [[np.cos(theta), np.sin(theta)]], x).values[0]
            err = np.max(np.abs(scaled - direct)) / np.max(direct)
            checks.append(_below(f"homogeneity r={r:g} theta={theta:.4f}", err, 1e-10, start))
    return checks


def roundtrips():
    """Wigner round trips at 128^2 and the two density routes for coherent(0.8)."""
    grid = PhaseSpaceGrid.square(7.0, 128)
    out = PhaseSpaceGrid.square(6.0, 128)
    k = np.arange(-7.2, 7.2 + 1e-9, 0.4)
    points = product_params(k, k)
    reach = 7.0 * np.sqrt(2.0) * 7.2
    X = np.arange(-reach, reach + 1e-9, 0.1)
    checks = []
    for spec in (StateSpec.vacuum(), StateSpec.coherent(1 + 0.5j), StateSpec.fock(1)):
        start = time.perf_counter()
        rec = invert_to_wigner(symplectic_tomogram(wigner(spec, grid), points, X), out)
        err = relative_l2(rec.values, wigner(spec, out).values)
        checks.append(_below(f"Wigner round trip, {spec.kind}", err, 1e-2, start))
    spec = StateSpec.coherent(0.8)
    truth = build_state(spec, 12)
    start = time.perf_counter()
    W = wigner(spec, PhaseSpaceGrid.square(6.0, 256))
    kd = np.arange(-7.2, 7.2 + 1e-9, 0.4)
    plane = invert_to_density(symplectic_tomogram(W, product_params(kd, kd),
                                                  np.arange(-61.1, 61.1 + 1e-9, 0.05)), 12)
    theta = np.arange(32) * np.pi / 32
    polar = homodyne_invert_to_density(homodyne_tomogram(W, theta, np.arange(-10, 10 + 1e-9, 0.02)),
                                       12)
    checks.append(Check("density fidelity, plane route", plane.fidelity(truth), 0.999,
                        plane.fidelity(truth) > 0.999, time.perf_counter() - start))
    checks.append(Check("density fidelity, polar route", polar.fidelity(truth), 0.999,
                        polar.fidelity(truth) > 0.999))
    checks.append(_below("density routes agree", np.max(np.abs(plane.entries - polar.entries)),
                         1e-3, time.perf_counter()))
    return checks


def duality():
    """Weak duality, cutoff monotonicity, projection and the star commutator."""
    window = WindowSpec.gaussian(0.5)
    states = [StateSpec.vacuum(), StateSpec.coherent(0.8), StateSpec.fock(1)]
    checks = []
    errors = []
    for cutoff in (4.0, 6.0, 8.0):
        start = time.perf_counter()
        pair = ThickSymplecticPair(12, window, cutoff=cutoff, count=int(5 * cutoff))
        errors.append(weak_duality_error(pair, states))
        checks.append(_below(f"weak duality, cutoff {cutoff:g}", errors[-1], 1e-2, start))
    checks.append(Check("weak duality decreases with cutoff", float(np.max(np.diff(errors))), 0.0,
                        bool(np.all(np.diff(errors) <= 0))))
    start = time.perf_counter()
    rho = build_state(StateSpec.coherent(0.8), 12).entries
    checks.append(_below("projection defect", projection_defect(pair, rho), 1e-6, start))
    start = time.perf_counter()
    big = ThickSymplecticPair(16, window, cutoff=10.0, count=50)
    checks.append(_below("star commutator vs i (n_max=16)", commutator_check(big), 1e-2, start))
    return checks


def _smoothed(values, bins=2.0):
    return gaussian_filter1d(values, bins, mode="constant")


def group_orbit():
    """Group-orbit profiles against the direct tomogram, the scalar case and the quadric case."""
    X = np.arange(-6.0, 6.0 + 1e-9, 0.05)
    checks = []
    for spec in (StateSpec.vacuum(), StateSpec.fock(1)):
        rho = build_state(spec, 12)
        worst = 0.0
        start = time.perf_counter()
        for mu, nu in ((1.0, 0.0), (0.6, -0.8), (1.5, 0.5)):
            values, _ = group_orbit_tomogram(rho, [mu, nu, 0, 0, 0, 0], X, bin_average=False)
            direct = symplectic_tomogram_from_density(rho.entries, [[mu, nu]], X).values[0]
            worst = max(worst, float(np.max(np.abs(values - direct))))
        checks.append(_below(f"group orbit vs direct tomogram, {spec.kind}", worst, 1e-6, start))
    start = time.perf_counter()
    values, _ = group_orbit_tomogram(build_state(StateSpec.vacuum(), 12), [0, 0, 0, 0, 0, 1.3], X)
    outside = float(np.sum(np.abs(values[np.abs(X - 1.3) > 1e-9])))
    checks.append(_below("scalar generator fills one bin", outside, 1e-12, start))
    checks.extend(quadratic_orbit_checks())
    return checks


def quadratic_orbit_checks(dX=0.05):
    """Harmonic generator on the vacuum against the operator-level and Wigner-level quadric profiles.

    Both sides are smoothed with a Gaussian of two bins; the metric is the
    largest difference over the larger peak. The orbit uses a t grid wide
    enough to resolve a point spectrum at that smoothing.
    """
    X = np.arange(-1.0, 6.0 + 1e-9, dX)
    rho = build_state(StateSpec.vacuum(), 12)
    start = time.perf_counter()
    orbit, _ = group_orbit_tomogram(rho, [0, 0, 0, 0.5, 0.5, 0], X, t_grid=np.linspace(-60, 60, 4096))
    pair = QuadricPair(12, cutoff=1.0, count=1, dX=dX)
    idx = np.argmin(np.sum(pair.shifts ** 2, axis=1))
    op = pair.dequantize(rho.entries).values[idx].real
    op = np.interp(X, pair.X, op, left=0.0, right=0.0)
    H = QuadraticHamiltonianSymbol.from_matrix(np.eye(2))
    W = wigner(StateSpec.vacuum(), PhaseSpaceGrid.square(8.0, 256))
    wig = quantum_quadric_tomogram(W, H, [[0.0, 0.0]], X).values[0]
    a, b, c = (_smoothed(v) for v in (orbit, op, wig))
    checks = []
    for name, other in (("operator-level", b), ("Wigner-level", c)):
        err = np.max(np.abs(a - other)) / max(a.max(), other.max())
        checks.append(_below(f"quadratic orbit vs {name} quadric tomogram", err, 5e-2, start,
                             "2-bin smoothing"))
    return checks


def thick_radon_contrast():
    """Gaussian-window deconvolution succeeds; a box of width 2 pi is refused at r = 1."""
    W = wigner(StateSpec.vacuum(), PhaseSpaceGrid.square(6.0, 128))
    theta = np.arange(32) * np.pi / 32
    X = np.arange(-10.0, 10.0 + 1e-9, 0.02)
    start = time.perf_counter()
    h = thick_radon_tomogram(W, WindowSpec.gaussian(0.5), theta, X)
    rho = thick_radon_deconvolve_invert(h, 10)
    fid = rho.fidelity(build_state(StateSpec.vacuum(), 10))
    checks = [Check("gaussian window deconvolution fidelity", fid, 0.99, fid > 0.99,
                    time.perf_counter() - start)]
    start = time.perf_counter()
    box = thick_radon_tomogram(W, WindowSpec.rect(2 * np.pi), theta, X)
    try:
        thick_radon_deconvolve_invert(box, 10)
        refused, named = False, False
    except WindowNotInvertible as exc:
        refused = True
        named = any(abs(r - 1.0) < 1e-12 for r in exc.offending_r)
    checks.append(Check("box window of width 2 pi refused at r = 1", float(refused and named), 1.0,
                        refused and named, time.perf_counter() - start))
    return checks


SUITES = {
    "gaussians": gaussians,
    "roundtrips": roundtrips,
    "homogeneity": homogeneity,
    "duality": duality,
    "group-orbit": group_orbit,
    "thick-radon-contrast": thick_radon_contrast,
}


def run(name):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name]()
