"""Thick tomography: window-smoothed marginals and their inversion."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.ndimage import convolve1d
from scipy.special import ndtr

from ._fourier import DEFAULT_DAMPING
from .exceptions import (TruncationTooSmall, WindowNotInvertible,
                         WindowNotInvertibleAtUnitFrequency)
from .grids import check_support
from .quadric import quantum_quadric_inverse, quantum_quadric_tomogram
from .states import hermite_functions
from .symplectic import homodyne_invert_to_density, invert_to_wigner, symplectic_tomogram
from .tomogram import Tomogram

UNIT_FREQUENCY_FLOOR = 1e-10
RADIAL_FLOOR = 1e-8
_X_CHUNK = 64


@dataclass(frozen=True)
class WindowSpec:
    """Unit-mass window ``Xi``: a delta, a Gaussian of width ``sigma`` or a box of ``width``."""

    kind: str = "delta"
    sigma: float = None
    width: float = None

    def __post_init__(self):
        if self.kind == "gaussian":
            if self.sigma is None or not self.sigma > 0:
                raise ValueError("gaussian window needs sigma > 0")
        elif self.kind == "rect":
            if self.width is None or not self.width > 0:
                raise ValueError("rect window needs width > 0")
        elif self.kind != "delta":
            raise ValueError(f"unknown window kind {self.kind!r}")

    @classmethod
    def delta(cls):
        return cls("delta")

    @classmethod
    def gaussian(cls, sigma):
        return cls("gaussian", sigma=float(sigma))

    @classmethod
    def rect(cls, width):
        return cls("rect", width=float(width))

    @classmethod
    def from_dict(cls, data):
        return cls(data["kind"], sigma=data.get("sigma"), width=data.get("width"))

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == "gaussian":
            out["sigma"] = self.sigma
        if self.kind == "rect":
            out["width"] = self.width
        return out

    def value(self, z):
        z = np.asarray(z, dtype=float)
        if self.kind == "gaussian":
            s = self.sigma
            return np.exp(-0.5 * (z / s) ** 2) / (np.sqrt(2.0 * np.pi) * s)
        if self.kind == "rect":
            return np.where(np.abs(z) < 0.5 * self.width, 1.0 / self.width, 0.0)
        raise ValueError("the delta window has no pointwise values")

    def fourier(self, k):
        """``int Xi(z) exp(-i k z) dz``."""
        k = np.asarray(k, dtype=float)
        if self.kind == "gaussian":
            return np.exp(-0.5 * (self.sigma * k) ** 2)
        if self.kind == "rect":
            return np.sinc(k * self.width / (2.0 * np.pi))
        return np.ones_like(k)

    def cdf(self, z):
        z = np.asarray(z, dtype=float)
        if self.kind == "gaussian":
            return ndtr(z / self.sigma)
        if self.kind == "rect":
            return np.clip(z / self.width + 0.5, 0.0, 1.0)
        return (z >= 0).astype(float)

    @property
    def normalization_constant(self):
        """``N = 1 / Xi~(-1)``; raises when the transform vanishes at unit frequency."""
        value = float(self.fourier(-1.0))
        if abs(value) < UNIT_FREQUENCY_FLOOR:
            raise WindowNotInvertibleAtUnitFrequency(
                f"{self.kind} window transform at unit frequency is {value:.3g}")
        return 1.0 / value

    def transform_zeros(self, r_max):
        """Exact zeros of ``Xi~(-r)`` in ``(0, r_max]``."""
        if self.kind != "rect":
            return []
        # zeros at w r / pi = 2 m; compare rationally to avoid rounding at the endpoint
        limit = Fraction(float(r_max)) * Fraction(float(self.width)) / Fraction(np.pi)
        count = int(limit // 2)
        return [2.0 * np.pi * m / self.width for m in range(1, count + 1)]

    def reach(self):
        if self.kind == "gaussian":
            return 10.0 * self.sigma
        if self.kind == "rect":
            return 0.5 * self.width
        return 0.0

    def kernel(self, dx):
        """Convolution weights on offsets ``j dx``, centred, summing to one.

        Gaussians wider than two steps use point samples (exact transform to
        quadrature precision); narrower windows use the mass in each bin.
        """
        if self.kind == "delta":
            return np.ones(1)
        n = int(np.ceil(self.reach() / dx)) + 1
        z = np.arange(-n, n + 1) * dx
        if self.kind == "gaussian" and self.sigma >= 2.0 * dx:
            k = self.value(z) * dx
        else:
            k = self.cdf(z + 0.5 * dx) - self.cdf(z - 0.5 * dx)
        return k / k.sum()


def _window(t, window):
    window = window if window is not None else t.window
    if window is None:
        raise ValueError("no window given and the tomogram carries none")
    return window


def window_marginal(W, window, mu_nu_points, X):
    """``(1/2pi) int W(q, p) Xi(X - mu q - nu p) dq dp`` by direct quadrature on the grid."""
    if W.grid.ndim != 2:
        raise ValueError("thick tomograms here are single-mode")
    check_support(W.values, "Wigner function")
    X = np.asarray(X, dtype=float)
    w = (W.values * W.grid.trapezoid_weights()).ravel() / (2.0 * np.pi)
    keep = w != 0
    pts = W.grid.points()[keep]
    w = w[keep]
    params = np.atleast_2d(np.asarray(mu_nu_points, dtype=float))
    out = np.empty((len(params), X.size))
    for i, (mu, nu) in enumerate(params):
        s = pts @ np.array([mu, nu])
        for j in range(0, X.size, _X_CHUNK):
            x = X[j:j + _X_CHUNK]
            out[i, j:j + _X_CHUNK] = window.value(x[:, None] - s[None, :]) @ w
    return out


def thick_symplectic_tomogram(W, window, mu_nu_points, X):
    """Thick symplectic tomogram by direct window evaluation (the delta window bins)."""
    if window.kind == "delta":
        return symplectic_tomogram(W, mu_nu_points, X)
    params = np.atleast_2d(np.asarray(mu_nu_points, dtype=float))
    values = window_marginal(W, window, params, X)
    return Tomogram("symplectic", X, params, values, ("mu", "nu"), window=window)


def thick_radon_tomogram(W, window, theta, X):
    """Window-smoothed quadrature distributions for each angle."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if window.kind == "delta":
        from .symplectic import homodyne_tomogram
        return homodyne_tomogram(W, theta, X)
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    values = window_marginal(W, window, dirs, X)
    return Tomogram("homodyne", X, theta[:, None], values, ("theta",), window=window)


def gaussian_thick_tomogram(alpha, mu_nu_points, X, sigma=0.0):
    """Closed-form tomogram of the coherent state ``alpha`` with a Gaussian window (``sigma = 0``: none).

    Each profile is normal with mean ``sqrt(2) (mu Re alpha + nu Im alpha)``
    and variance ``(mu^2 + nu^2) / 2 + sigma^2``.
    """
    params = np.atleast_2d(np.asarray(mu_nu_points, dtype=float))
    X = np.asarray(X, dtype=float)
    alpha = complex(alpha)
    mean = np.sqrt(2.0) * (params[:, 0] * alpha.real + params[:, 1] * alpha.imag)
    spread = params[:, 0] ** 2 + params[:, 1] ** 2 + 2.0 * sigma ** 2
    values = np.exp(-(X[None, :] - mean[:, None]) ** 2 / spread[:, None]) / np.sqrt(np.pi * spread)[:, None]
    window = WindowSpec.gaussian(sigma) if sigma > 0 else None
    return Tomogram("symplectic", X, params, values, ("mu", "nu"), window=window)


def thicken(t, window):
    """Convolve every profile of a singular tomogram with the window in X."""
    if t.family not in ("symplectic", "homodyne", "quadric"):
        raise ValueError(f"cannot thicken a {t.family!r} tomogram")
    if t.is_thick:
        raise ValueError("tomogram is already thick; thicken its singular version")
    k = window.kernel(t.dx)
    values = convolve1d(t.values, k, axis=-1, mode="constant", cval=0.0) if k.size > 1 \
        else t.values.copy()
    return t._replace(values=values, window=window)


def thick_invert_to_wigner(t, out_grid, window=None, eps=DEFAULT_DAMPING):
    """Invert a thick symplectic tomogram: the singular inverse scaled by ``N``."""
    window = _window(t, window)
    return invert_to_wigner(t, out_grid, eps=eps, scale=window.normalization_constant)


def _radial_check(window, r_max, dr):
    zeros = window.transform_zeros(r_max)
    n = int(round(r_max / dr))
    r = np.arange(n + 1) * dr
    small = r[np.abs(window.fourier(-r)) < RADIAL_FLOOR]
    offending = sorted({float(v) for v in np.round(np.concatenate([zeros, small]), 12)})
    if offending:
        shown = ", ".join(f"{v:.6g}" for v in offending[:8])
        more = "" if len(offending) <= 8 else f" and {len(offending) - 8} more"
        raise WindowNotInvertible(
            f"{window.kind} window transform vanishes on the radial quadrature at "
            f"r = {shown}{more}", offending_r=offending)


def thick_radon_deconvolve_invert(h, n_max, window=None, r_max=8.0, dr=0.02,
                                  eps=DEFAULT_DAMPING, dim=None):
    """Density matrix from a thick homodyne tomogram, dividing out ``Xi~(-r)`` per radius."""
    window = _window(h, window)
    if window.kind == "delta":
        return homodyne_invert_to_density(h, n_max, r_max, dr, eps, dim)
    _radial_check(window, r_max, dr)
    return homodyne_invert_to_density(h, n_max, r_max, dr, eps, dim,
                                      transfer=lambda r: window.fourier(-r))


def thick_quadric_tomogram(W, H, window, r_points, X):
    """Quadric tomogram convolved in X with the window."""
    return quantum_quadric_tomogram(W, H, r_points, X, window=window)


def thick_quadric_inverse(t, H, out_grid, window=None, eps=DEFAULT_DAMPING, constant=None):
    """Wigner function from a thick quadric tomogram.

    Default constant ``|det B| N / (2 pi)^N``; pass ``constant`` to use a
    separately validated value.
    """
    window = _window(t, window)
    if constant is None:
        constant = H.inverse_constant() * window.normalization_constant
    return quantum_quadric_inverse(t, H, out_grid, eps=eps, constant=constant)


# operator forms ------------------------------------------------------------

def _quadrature_nodes(n_max, resolution):
    reach = np.sqrt(2.0 * n_max + 1.0) + 7.0
    step = min(0.05, resolution)
    x = np.arange(-reach, reach + 0.5 * step, step)
    return x, np.full(x.size, step)


def quadrature_matrix_function(fn, mu, nu, n_max, resolution=0.05):
    """``fn(mu Q + nu P)`` on the first ``n_max + 1`` Fock states.

    Uses the continuous spectral decomposition of the rotated quadrature:
    ``<m| fn(r Q_theta) |n> = exp(i theta (m - n)) int psi_m psi_n fn(r x) dx``,
    with ``resolution`` the node spacing in ``x``.
    """
    if n_max < 0:
        raise TruncationTooSmall("n_max must be nonnegative")
    r, theta = np.hypot(mu, nu), np.arctan2(nu, mu)
    x, w = _quadrature_nodes(n_max, resolution)
    psi = hermite_functions(x, n_max)                       # (n, x)
    block = (psi * (w * fn(r * x))) @ psi.T
    d = np.subtract.outer(np.arange(n_max + 1), np.arange(n_max + 1))
    return block * np.exp(1j * theta * d)


def _gaussian_only(window):
    if window.kind != "gaussian":
        raise ValueError("operator forms are provided for gaussian windows")


def thick_dequantizer_matrix(window, X, mu, nu, n_max):
    """``Xi_sigma(X - mu Q - nu P)`` as a truncated matrix."""
    _gaussian_only(window)
    r = np.hypot(mu, nu)
    resolution = window.sigma / (4.0 * r) if r > 0 else 0.05
    return quadrature_matrix_function(lambda v: window.value(X - v), mu, nu, n_max, resolution)


def thick_quantizer_matrix(window, X, mu, nu, n_max, dim=None):
    """``(N / 2pi) exp(iX) exp(-i (mu Q + nu P))`` as a truncated matrix."""
    from ._operators import basis_size, quadrature_function

    r, theta = np.hypot(mu, nu), np.arctan2(nu, mu)
    dim = dim or basis_size(n_max, r)
    block = quadrature_function(lambda v: np.exp(-1j * v), r, theta, n_max, dim)[0]
    return window.normalization_constant * np.exp(1j * X) * block / (2.0 * np.pi)
