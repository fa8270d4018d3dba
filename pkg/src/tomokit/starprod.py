"""Quantizer/dequantizer pairs, the operational star product and group-orbit tomograms.

A pair maps operators on ``n_max + 1`` Fock states to symbols sampled on a
parameter grid (``dequantize``) and back (``quantize``, a weighted sum of
quantizer matrices). The star product composes the two maps around a
matrix product.
"""

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from ._fourier import DEFAULT_DAMPING, trapezoid
from ._operators import basis_size, quadrature_function
from .exceptions import DimensionMismatch, TraceNotDecayed
from .states import FockDensityMatrix, StateSpec, build_state, hermite_functions, quadrature_operators, \
    quadrature_products
from .thick import WindowSpec, quadrature_matrix_function

HERMITIAN_TOLERANCE = 1e-10
_X_REACH_PAD = 7.0


@dataclass
class Symbol:
    """Values of a symbol on its pair's parameter grid."""

    pair: object
    values: np.ndarray

    def _check(self, other):
        if other.pair is not self.pair:
            raise DimensionMismatch("symbols belong to different quantizer/dequantizer pairs")

    def __add__(self, other):
        self._check(other)
        return Symbol(self.pair, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return Symbol(self.pair, self.values - other.values)

    def __mul__(self, scalar):
        return Symbol(self.pair, self.values * scalar)

    __rmul__ = __mul__

    @property
    def imag_max(self):
        return float(np.max(np.abs(np.imag(self.values))))


class QDPair:
    """Base class: subclasses define the grid, the two maps and the pointwise operators."""

    name = "pair"

    def __init__(self, n_max):
        self.n_max = int(n_max)

    @property
    def dim(self):
        return self.n_max + 1

    def check_operator(self, A):
        A = np.asarray(A)
        if A.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"{self.name} pair works on {self.dim} x {self.dim} matrices, "
                                    f"got {A.shape}")
        return A

    def dequantizer(self, x):
        raise NotImplementedError

    def quantizer(self, x):
        raise NotImplementedError

    def dequantize(self, A):
        raise NotImplementedError

    def quantize(self, symbol):
        raise NotImplementedError


class ThickSymplecticPair(QDPair):
    """Dequantizer ``Xi(X - mu Q - nu P)``, quantizer ``(N/2pi) exp(iX) exp(-i(mu Q + nu P))``.

    ``window`` defaults to the delta window (the singular symplectic pair).
    The (mu, nu) grid is the midpoint grid of ``[-cutoff, cutoff]^2`` with
    ``count`` nodes per axis; X is uniform with step ``dX``.
    """

    name = "thick-symplectic"

    def __init__(self, n_max, window=None, cutoff=8.0, count=40, dX=0.1):
        super().__init__(n_max)
        self.window = window or WindowSpec.delta()
        self.cutoff = float(cutoff)
        step = 2.0 * cutoff / count
        self.axis = -cutoff + (np.arange(count) + 0.5) * step
        self.step = step
        mu, nu = np.meshgrid(self.axis, self.axis, indexing="ij")
        self.mu, self.nu = mu.ravel(), nu.ravel()
        self.r = np.hypot(self.mu, self.nu)
        self.theta = np.arctan2(self.nu, self.mu)
        self.x_reach = np.sqrt(2.0 * self.n_max + 1.0) + _X_REACH_PAD
        reach = self.r.max() * self.x_reach + self.window.reach()
        n = int(np.ceil(reach / dX))
        self.X = np.arange(-n, n + 1) * dX
        self.dX = dX

    @property
    def points(self):
        """Parameter points ``(X, mu, nu)`` in symbol order (plane-major, X fastest)."""
        mu = np.repeat(self.mu, self.X.size)
        nu = np.repeat(self.nu, self.X.size)
        return np.stack([np.tile(self.X, self.mu.size), mu, nu], axis=1)

    def weights(self):
        return np.multiply.outer(np.full(self.mu.size, self.step ** 2), trapezoid(self.X, self.dX))

    def dequantizer(self, x):
        X, mu, nu = x
        if self.window.kind == "delta":
            raise ValueError("the delta dequantizer has no matrix form")
        return quadrature_matrix_function(lambda v: self.window.value(X - v), mu, nu, self.n_max,
                                          self.window.sigma / (4.0 * max(np.hypot(mu, nu), 1e-12))
                                          if self.window.kind == "gaussian" else 0.01)

    def quantizer(self, x):
        X, mu, nu = x
        r, theta = np.hypot(mu, nu), np.arctan2(nu, mu)
        block = quadrature_function(lambda v: np.exp(-1j * v), r, theta, self.n_max,
                                    basis_size(self.n_max, r))[0]
        return self.window.normalization_constant * np.exp(1j * X) * block / (2.0 * np.pi)

    def _profile(self, A, r, theta):
        """``Tr(A Xi(X - r Q_theta))`` on the X grid for one direction."""
        n = np.arange(self.dim)
        rotated = A * np.exp(-1j * theta * np.subtract.outer(n, n))
        # y = r x sampled finely enough to resolve the oscillator functions
        sub = max(1, int(np.ceil(self.dX / (0.05 * r))))
        h = self.dX / sub
        m = int(np.ceil(r * self.x_reach / h))
        y = np.arange(-m, m + 1) * h
        psi = hermite_functions(y / r, self.n_max)
        density = np.einsum("ny,nm,my->y", psi, rotated, psi) / r     # Tr(A delta(y - r Q_theta))
        if self.window.kind == "delta":
            line = density
        else:
            k = self.window.value(np.arange(-int(np.ceil(self.window.reach() / h)),
                                            int(np.ceil(self.window.reach() / h)) + 1) * h) * h
            line = fftconvolve(density.real, k, mode="same") + \
                1j * fftconvolve(density.imag, k, mode="same")
        # every ``sub``-th y node is an X node; both grids are centred on 0
        take = line[(m % sub)::sub]
        out = np.zeros(self.X.size, complex)
        lo = self.X.size // 2 - len(take) // 2
        out[lo:lo + len(take)] = take
        return out

    def dequantize(self, A):
        A = self.check_operator(A)
        values = np.stack([self._profile(A, r, t) for r, t in zip(self.r, self.theta)])
        return Symbol(self, values)

    def quantize(self, symbol):
        if symbol.pair is not self:
            raise DimensionMismatch("symbol belongs to another pair")
        g = (symbol.values * np.exp(1j * self.X)[None, :]) @ trapezoid(self.X, self.dX)
        blocks = quadrature_function(lambda v: np.exp(-1j * v), self.r, self.theta, self.n_max,
                                     basis_size(self.n_max, self.r.max()))
        A = np.einsum("p,pmn->mn", g * self.step ** 2, blocks)
        return self.window.normalization_constant * A / (2.0 * np.pi)


class QuadricPair(QDPair):
    """Operator-level quadric pair: ``delta(X - H_r)`` and ``c exp(i(X - H_r))``.

    ``H_r = 1/2 (Q - r).B.(Q - r) + C.(Q - r)`` with ``Q = (P, Q)`` acting on
    a buffered basis; the delta is binned on the X grid.

    The operator-level prefactor is not the Wigner-level ``|det B| / 2pi``:
    for positive-definite ``B`` it carries the extra factor
    ``(2 sin(w/2) / w)^2`` with ``w = sqrt(det B)``, which matches the
    round-trip calibration (:meth:`calibration_spread`). Other ``B`` are
    calibrated on the vacuum.
    """

    name = "quadric"

    def __init__(self, n_max, B=((1.0, 0.0), (0.0, 1.0)), C=(0.0, 0.0), cutoff=6.0, count=30,
                 dX=0.05, buffer=60, constant=None):
        super().__init__(n_max)
        self.B = np.asarray(B, dtype=float)
        self.C = np.asarray(C, dtype=float)
        step = 2.0 * cutoff / count
        self.axis = -cutoff + (np.arange(count) + 0.5) * step
        self.step = step
        mu, nu = np.meshgrid(self.axis, self.axis, indexing="ij")
        self.shifts = np.stack([mu.ravel(), nu.ravel()], axis=1)
        self.buffer = buffer
        self.dX = dX
        self._spectra = [self._spectrum(r) for r in self.shifts]
        top = max(s[0].max() for s in self._spectra)
        low = min(s[0].min() for s in self._spectra)
        self.X = np.arange(np.floor(low / dX) - 1, np.ceil(top / dX) + 2) * dX
        self.constant = 1.0
        if constant is None:
            constant = self.default_constant()
        self.constant = float(constant)

    def default_constant(self):
        det = np.linalg.det(self.B)
        if det > 0 and self.B[0, 0] > 0:
            w = np.sqrt(det)
            return det / (2.0 * np.pi) * (2.0 * np.sin(0.5 * w) / w) ** 2
        return 1.0 / self._raw_trace(build_state(StateSpec.vacuum(), self.n_max).entries)

    def _raw_trace(self, rho):
        return float(np.trace(rho @ self.quantize(self.dequantize(rho))).real / self.constant)

    def calibration_spread(self, states):
        """Relative spread of the prefactor fitted on each state (zero if it is state-independent)."""
        fits = np.array([1.0 / self._raw_trace(build_state(s, self.n_max).entries) for s in states])
        return float((fits.max() - fits.min()) / abs(fits.mean())), fits

    def hamiltonian(self, r):
        big = self.n_max + self.buffer
        q, p = quadrature_operators(big, buffer=0)
        qq, pp, sym = quadrature_products(big, buffer=4)
        eye = np.eye(big + 1)
        ops = [p - r[0] * eye, q - r[1] * eye]
        H = 0.5 * (self.B[0, 0] * (pp - 2 * r[0] * p + r[0] ** 2 * eye)
                   + self.B[1, 1] * (qq - 2 * r[1] * q + r[1] ** 2 * eye)
                   + 2 * self.B[0, 1] * (sym - r[0] * q - r[1] * p + r[0] * r[1] * eye))
        return H + self.C[0] * ops[0] + self.C[1] * ops[1]

    def _spectrum(self, r):
        lam, vec = np.linalg.eigh(self.hamiltonian(r))
        return lam, vec[: self.dim]

    def dequantize(self, A):
        A = self.check_operator(A)
        values = np.zeros((len(self.shifts), self.X.size), complex)
        for i, (lam, v) in enumerate(self._spectra):
            weight = np.einsum("mk,mn,nk->k", v.conj(), A, v)
            idx = np.clip(np.rint((lam - self.X[0]) / self.dX).astype(int), 0, self.X.size - 1)
            np.add.at(values[i], idx, weight / self.dX)
        return Symbol(self, values)

    def quantize(self, symbol):
        if symbol.pair is not self:
            raise DimensionMismatch("symbol belongs to another pair")
        g = symbol.values @ (np.exp(1j * self.X) * self.dX)
        out = np.zeros((self.dim, self.dim), complex)
        for gi, (lam, v) in zip(g, self._spectra):
            out += gi * (v * np.exp(-1j * lam)) @ v.conj().T
        return self.constant * self.step ** 2 * out


class DeformedPair(QDPair):
    """Deformed dequantizer at the Wigner level: symbols are deformed tomograms of W_A / 2pi."""

    name = "deformed"

    def __init__(self, n_max, grid, mu_points, nu_points, X):
        super().__init__(n_max)
        self.grid = grid
        self.mu_points = np.asarray(mu_points, dtype=float)
        self.nu_points = np.asarray(nu_points, dtype=float)
        self.X = np.asarray(X, dtype=float)

    def dequantize(self, A):
        from .quadric import deformed_quantum_tomogram
        from .states import wigner_from_density

        A = self.check_operator(A)
        W = wigner_from_density(FockDensityMatrix(A, check=False), self.grid)
        t = deformed_quantum_tomogram(W, self.mu_points, self.nu_points, self.X)
        return Symbol(self, t.values)

    def quantize(self, symbol):
        raise NotImplementedError("the deformed quantizer needs the Weyl quantization of |q|, "
                                  "which is not provided; use the Wigner-level inverse")


# operations -------------------------------------------------------------------

def dequantize(A, pair):
    return pair.dequantize(np.asarray(A, dtype=complex))


def quantize(symbol):
    return symbol.pair.quantize(symbol)


def star_product(f, g):
    """``f * g``: dequantize the product of the quantized operators."""
    f._check(g)
    return f.pair.dequantize(quantize(f) @ quantize(g))


def weak_duality_error(pair, test_states):
    """Largest ``|1 - Tr(rho quantize(dequantize(rho)))|`` over the test states."""
    worst = 0.0
    for state in test_states:
        rho = state if isinstance(state, FockDensityMatrix) else build_state(state, pair.n_max)
        try:
            back = quantize(pair.dequantize(rho.entries))
        except NotImplementedError:
            return 1.0
        worst = max(worst, abs(1.0 - rho.fidelity(back)))
    return worst


def projection_defect(pair, A):
    """Frobenius change when ``quantize . dequantize`` is applied a second time."""
    once = quantize(pair.dequantize(A))
    twice = quantize(pair.dequantize(once))
    return float(np.linalg.norm(twice - once))


def commutator_check(pair, interior=None):
    """Max elementwise error of ``quantize(f_Q * f_P - f_P * f_Q)`` against ``i 1``.

    Compared on the interior block of the first ``interior`` states (half the
    truncation by default), away from the cropped edge of the truncated
    operators.
    """
    q, p = quadrature_operators(pair.n_max)
    fq, fp = pair.dequantize(q), pair.dequantize(p)
    comm = star_product(fq, fp) - star_product(fp, fq)
    k = interior or pair.dim // 2
    return float(np.max(np.abs(quantize(comm)[:k, :k] - 1j * np.eye(k))))


# group orbit --------------------------------------------------------------------

GENERATORS = ("Q", "P", "QP_sym", "Q2", "P2", "I")


def generator_matrix(coefficients, dim, buffer=0):
    """``sum g_a L_a`` over ``(Q, P, (QP+PQ)/2, Q^2, P^2, 1)`` on ``dim`` Fock states."""
    g = np.asarray(coefficients, dtype=float)
    if g.shape != (6,):
        raise ValueError("six generator coefficients expected (Q, P, (QP+PQ)/2, Q^2, P^2, 1)")
    q, p = quadrature_operators(dim - 1, buffer=0)
    qq, pp, sym = quadrature_products(dim - 1, buffer=max(buffer, 4))
    return g[0] * q + g[1] * p + g[2] * sym + g[3] * qq + g[4] * pp + g[5] * np.eye(dim)


def default_t_grid():
    return np.linspace(-12.0, 12.0, 1024)


def group_orbit_tomogram(rho, coefficients, X, t_grid=None, damping=True,
                         eps=DEFAULT_DAMPING, dim=None, bin_average=True):
    """``(1/2pi) int dt exp(itX) Tr(rho exp(-it G))`` on the X grid.

    Values are bin averages (comparable with binned tomograms) unless
    ``bin_average`` is False, which gives point values.

    The orbit is evaluated spectrally on a basis large enough for the linear
    part; a purely scalar generator has a point spectrum and is binned
    exactly. Returns ``(values, info)`` where ``info`` records the boundary
    magnitude and whether damping was applied.
    """
    rho = rho if isinstance(rho, FockDensityMatrix) else FockDensityMatrix(rho)
    X = np.asarray(X, dtype=float)
    dX = (X[-1] - X[0]) / (X.size - 1)
    g = np.asarray(coefficients, dtype=float)
    t = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if not np.allclose(t, -t[::-1]):
        raise ValueError("t grid must be symmetric about 0")
    if not np.any(g[:5]):
        values = np.zeros(X.size)
        k = int(np.floor((g[5] - X[0]) / dX + 0.5))
        if 0 <= k < X.size:
            values[k] = np.trace(rho.entries).real / dX
        return values, {"boundary": 1.0, "damped": False, "scalar": True}
    n = rho.n_max
    linear = np.hypot(g[0], g[1]) * np.abs(t).max()
    quad = np.max(np.abs(g[2:5]))
    dim = dim or (basis_size(n, linear) if quad == 0 else basis_size(n, linear) + 40)
    lam, vec = np.linalg.eigh(generator_matrix(g, dim, buffer=8))
    v = vec[: n + 1]
    weight = np.einsum("mk,mn,nk->k", v.conj(), rho.entries, v).real
    trace = np.exp(-1j * np.outer(t, lam)) @ weight
    boundary = float(max(abs(trace[0]), abs(trace[-1])))
    info = {"boundary": boundary, "damped": False, "basis": dim, "scalar": False}
    if boundary > 1e-8:
        if not damping and boundary > 1e-4:
            raise TraceNotDecayed(f"|Tr(rho U)| = {boundary:.3g} at the ends of the t grid")
        if damping:
            trace = trace * np.exp(-eps * t ** 2)
            info["damped"] = True
            info["damping"] = eps
    w = trapezoid(t, (t[-1] - t[0]) / (t.size - 1))
    if bin_average:
        w = w * np.sinc(t * dX / (2.0 * np.pi))
    values = (np.exp(1j * np.outer(X, t)) @ (w * trace)).real / (2.0 * np.pi)
    return values, info
