"""Quantum tomograms over quadrics in phase space, single-mode and bipartite.

The symbol ``H(Q) = 1/2 (Q - r).B.(Q - r) + C.(Q - r)`` uses the phase-space
vector ``Q = (p_1..p_N, q_1..q_N)`` (momenta first) and a shift ``r`` in the
same order, so ``r = (mu_1..mu_N, nu_1..nu_N)`` pairs ``mu`` with momenta.
Grids store coordinates as ``(q_1, p_1, q_2, p_2, ...)``; the symbol
permutes them.
"""

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ._binning import LevelSetBinner, bin_layout
from ._fourier import (DEFAULT_DAMPING, IMAG_TOLERANCE, as_product_grid, damping, fourier_weights,
                       product_params, real_part, trapezoid, unit_frequency)
from .classical import (QuadricSpec, deformed_radon, quadric_backproject, quadric_hessian,
                        quadric_level)
from .exceptions import DimensionMismatch
from .grids import ClassicalField, PhaseSpaceGrid, WignerField, check_support
from .tomogram import Tomogram


def momentum_first_order(modes):
    """Grid column order that yields ``(p_1..p_N, q_1..q_N)``."""
    return np.array([2 * j + 1 for j in range(modes)] + [2 * j for j in range(modes)])


@dataclass(frozen=True)
class QuadraticHamiltonianSymbol:
    """Classical symbol of a shifted quadratic Hamiltonian on ``N`` modes."""

    quadric: QuadricSpec

    def __post_init__(self):
        if self.quadric.dim % 2:
            raise DimensionMismatch("quadratic symbols need an even-dimensional B (2N x 2N)")

    @classmethod
    def from_matrix(cls, B, C=None, shift=None):
        return cls(QuadricSpec(B=B, C=C, shift=shift))

    @property
    def modes(self):
        return self.quadric.dim // 2

    @property
    def order(self):
        return momentum_first_order(self.modes)

    @property
    def param_names(self):
        n = self.modes
        if n == 1:
            return ("mu", "nu")
        return tuple(f"mu{j + 1}" for j in range(n)) + tuple(f"nu{j + 1}" for j in range(n))

    def level_at(self, r):
        """``level_fn`` on grid points for the shift ``r``."""
        return quadric_level(self.quadric.matrix, self.quadric.linear, 0.5, self.order)(r)

    def hessian(self):
        return quadric_hessian(self.quadric.matrix, 0.5, self.order)

    def __call__(self, points, r=None):
        """Symbol values at grid-ordered points."""
        r = self.quadric.shift if r is None else r
        return self.level_at(r)(np.atleast_2d(points))[0]

    def inverse_constant(self):
        """``|det B| / (2 pi)^N``; the round trip validates it numerically."""
        self.quadric.require_invertible()
        return abs(self.quadric.det) / (2.0 * np.pi) ** self.modes


def _check_modes(W, H):
    if W.grid.ndim != 2 * H.modes:
        raise DimensionMismatch(f"{H.modes}-mode symbol on a {W.grid.modes}-mode Wigner field")


def quantum_quadric_tomogram(W, H, r_points=None, X=None, window=None):
    """Marginals of ``W / (2 pi)^N`` over the level sets of ``H`` for each shift ``r``.

    A ``window`` (thick tomogram) is applied by convolving each profile in X.
    """
    _check_modes(W, H)
    check_support(W.values, "Wigner function")
    r_points = np.atleast_2d(H.quadric.shift if r_points is None else r_points).astype(float)
    binner = LevelSetBinner(W.values / (2.0 * np.pi) ** H.modes, W.grid)
    hess = H.hessian()
    values = np.stack([binner.marginal(H.level_at(r), X, hessian=hess) for r in r_points])
    t = Tomogram("quadric", X, r_points, values, H.param_names,
                 meta={"B": [list(row) for row in H.quadric.B], "C": list(H.quadric.C),
                       "symbol": "quantum", "binned": True})
    if window is not None:
        from .thick import thicken
        t = thicken(t, window)
    return t


def quadric_coefficients(t, eps=DEFAULT_DAMPING):
    """Unit-frequency coefficients on the shift grid, with quadrature weights."""
    coeffs = unit_frequency(t.values, t.X, binned=t.binned)
    axes, steps, coeffs = as_product_grid(t.params, coeffs, t.param_names)
    w = np.ones(())
    for a, h in zip(axes, steps):
        w = np.multiply.outer(w, trapezoid(a, h))
    w = w * damping(*axes, eps=eps)
    return product_params(*axes), coeffs.ravel(), w.ravel()


def quantum_quadric_inverse(t, H, out_grid, eps=DEFAULT_DAMPING, constant=None,
                            imag_tolerance=IMAG_TOLERANCE):
    """Wigner function from a quadric tomogram on a uniform shift grid.

    ``W(Q) = K sum_r chi(r) exp(-i H_r(Q))`` with ``K = |det B| / (2 pi)^N``
    by default (divided by the window's transfer at unit frequency for
    thick tomograms).
    """
    if t.family != "quadric":
        raise ValueError(f"expected a quadric tomogram, got {t.family!r}")
    if out_grid.ndim != 2 * H.modes:
        raise DimensionMismatch("output grid does not match the symbol")
    k = H.inverse_constant() if constant is None else constant
    if t.window is not None and constant is None:
        k = k * t.window.normalization_constant
    centers, coeffs, w = quadric_coefficients(t, eps)
    pts = out_grid.points()[:, H.order]
    values = quadric_backproject(coeffs, centers, w, pts, H.quadric.matrix, H.quadric.linear, 0.5)
    re, residual = real_part(values * k, "quadric inverse", imag_tolerance)
    return WignerField(out_grid, re.reshape(out_grid.shape), residual=residual)


def round_trip_scale(reconstructed, reference):
    """Least-squares factor ``s`` minimizing ``|s * reconstructed - reference|``."""
    a = np.asarray(reconstructed).ravel()
    b = np.asarray(reference).ravel()
    return float(a @ b / (a @ a))


def estimate_inverse_constant(tomograms, references, H, out_grid, eps=DEFAULT_DAMPING):
    """Fit the inverse prefactor from round trips of known states.

    Each tomogram is inverted with unit constant and compared to its
    reference Wigner values through the phase-space integral, which grid
    smoothing leaves unchanged. Returns one estimate per state; a valid
    prefactor is the same for all of them.
    """
    estimates = []
    for t, ref in zip(tomograms, references):
        raw = quantum_quadric_inverse(t, H, out_grid, eps=eps, constant=1.0, imag_tolerance=np.inf)
        estimates.append(out_grid.integrate(ref) / out_grid.integrate(raw.values))
    return np.array(estimates)


# bipartite ----------------------------------------------------------------

def _split(grid):
    return PhaseSpaceGrid(grid.axes[:2]), PhaseSpaceGrid(grid.axes[2:])


def multipartite_quadric_tomogram(W2, symbols, r_points, X1, X2):
    """Joint tomogram of two single-mode subsystems, one quadric constraint each.

    ``r_points`` rows are ``(mu_1, nu_1, mu_2, nu_2)`` (shift of subsystem 1,
    then of subsystem 2); values have shape ``(points, len(X1), len(X2))``.
    """
    H1, H2 = symbols
    if W2.grid.ndim != 4 or H1.modes != 1 or H2.modes != 1:
        raise DimensionMismatch("bipartite tomograms take a two-mode field and two 1-mode symbols")
    check_support(W2.values, "two-mode Wigner function")
    r_points = np.atleast_2d(np.asarray(r_points, dtype=float))
    g1, g2 = _split(W2.grid)
    mass = W2.values.reshape(int(np.prod(g1.shape)), -1) * W2.grid.cell_volume / (2 * np.pi) ** 2
    b1, b2 = LevelSetBinner(None, g1), LevelSetBinner(None, g2)
    dx1, dx2 = bin_layout(X1)[1], bin_layout(X2)[1]
    keys1, idx1 = np.unique(r_points[:, :2], axis=0, return_inverse=True)
    keys2, idx2 = np.unique(r_points[:, 2:], axis=0, return_inverse=True)
    idx1, idx2 = idx1.ravel(), idx2.ravel()
    # all first-subsystem spreadings stacked: (shift1 * bins1, grid points 1)
    first = sparse.vstack([b1.spreading(H1.level_at(k), X1, H1.hessian()).T.tocsr()
                           for k in keys1]).tocsr()
    mass_t = np.ascontiguousarray(mass.T)
    n1 = len(X1)
    values = np.empty((len(r_points), n1, len(X2)))
    for j, k in enumerate(keys2):
        rows = np.nonzero(idx2 == j)[0]
        if rows.size == 0:
            continue
        s2 = b2.spreading(H2.level_at(k), X2, H2.hessian())
        partial = np.asarray((s2.T @ mass_t).T)                 # (grid points 1, bins 2)
        joint = (first @ partial).reshape(len(keys1), n1, -1) / (dx1 * dx2)
        values[rows] = joint[idx1[rows]]
    return Tomogram("multipartite_quadric", X1, r_points, values, ("mu1", "nu1", "mu2", "nu2"),
                    X2=np.asarray(X2, dtype=float),
                    meta={"B1": [list(r) for r in H1.quadric.B],
                          "B2": [list(r) for r in H2.quadric.B], "binned": True})


def multipartite_quadric_inverse(t, symbols, out_grid, eps=DEFAULT_DAMPING,
                                 imag_tolerance=IMAG_TOLERANCE):
    """Two-mode Wigner function from a bipartite quadric tomogram.

    Constant ``prod_j |det B_j| / (2 pi)``; the shift grid must be a product
    of one uniform grid per subsystem.
    """
    if t.family != "multipartite_quadric":
        raise ValueError(f"expected a multipartite quadric tomogram, got {t.family!r}")
    H1, H2 = symbols
    chi = np.einsum("pab,a,b->p", t.values, fourier_weights(t.X, 1.0, t.binned),
                    fourier_weights(t.X2, 1.0, t.binned))
    axes, steps, grid = as_product_grid(t.params, chi, t.param_names)
    w = [np.multiply.outer(trapezoid(axes[2 * j], steps[2 * j]),
                           trapezoid(axes[2 * j + 1], steps[2 * j + 1]))
         * damping(axes[2 * j], axes[2 * j + 1], eps=eps) for j in range(2)]
    n1, n2 = w[0].size, w[1].size
    chi = grid.reshape(n1, n2) * np.outer(w[0].ravel(), w[1].ravel())
    g1, g2 = _split(out_grid)
    kernels = []
    for H, g, j in ((H1, g1, 0), (H2, g2, 1)):
        centers = np.stack(np.meshgrid(axes[2 * j], axes[2 * j + 1], indexing="ij"), -1).reshape(-1, 2)
        pts = g.points()
        kern = np.stack([np.exp(-1j * H.level_at(c)(pts)[0]) for c in centers], axis=1)
        kernels.append(kern * H.inverse_constant())
    values = kernels[0] @ chi @ kernels[1].T
    re, residual = real_part(values, "bipartite quadric inverse", imag_tolerance)
    return WignerField(out_grid, re.reshape(out_grid.shape), residual=residual)


def deformed_quantum_tomogram(W, xi_points, nu_points, X):
    """Tomogram over ``X = xi q + nu q p`` (the Weyl symbol of ``xi q + nu (qp + pq)/2``)."""
    if W.grid.ndim != 2:
        raise DimensionMismatch("deformed quantum tomograms are single-mode")
    check_support(W.values, "Wigner function")
    f = ClassicalField(W.grid, W.values / (2.0 * np.pi))
    t = deformed_radon(f, xi_points, nu_points, X)
    t.param_names = ("xi", "nu")
    return t
