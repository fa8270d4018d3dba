"""Classical tomograms along quadrics and along the curves ``X = mu q + nu q p``."""

from dataclasses import dataclass

import numpy as np

from ._binning import LevelSetBinner
from ._fourier import (DEFAULT_DAMPING, as_product_grid, damping, product_params, real_part,
                       trapezoid, unit_frequency)
from .exceptions import DegenerateQuadric, SingularRegionRequested
from .grids import ClassicalField
from .tomogram import Tomogram

DET_TOLERANCE = 1e-12
DEFAULT_Q_MIN = 0.25
_CHUNK = 4096


@dataclass(frozen=True)
class QuadricSpec:
    """Symmetric matrix ``B``, linear term ``C`` and a default shift vector."""

    B: tuple
    C: tuple = None
    shift: tuple = None

    def __post_init__(self):
        B = np.atleast_2d(np.asarray(self.B, dtype=float))
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise ValueError("B must be a square matrix")
        if np.max(np.abs(B - B.T), initial=0.0) > 1e-12:
            raise ValueError("B must be symmetric")
        m = B.shape[0]
        C = np.zeros(m) if self.C is None else np.asarray(self.C, dtype=float).ravel()
        shift = np.zeros(m) if self.shift is None else np.asarray(self.shift, dtype=float).ravel()
        if C.size != m or shift.size != m:
            raise ValueError("C and shift must match the size of B")
        object.__setattr__(self, "B", tuple(map(tuple, B)))
        object.__setattr__(self, "C", tuple(C))
        object.__setattr__(self, "shift", tuple(shift))

    @property
    def matrix(self):
        return np.array(self.B)

    @property
    def linear(self):
        return np.array(self.C)

    @property
    def dim(self):
        return len(self.B)

    @property
    def det(self):
        return float(np.linalg.det(self.matrix))

    def require_invertible(self):
        if abs(self.det) < DET_TOLERANCE:
            raise DegenerateQuadric(f"|det B| = {abs(self.det):.3g} is below {DET_TOLERANCE}")

    @classmethod
    def from_dict(cls, data):
        return cls(B=data["B"], C=data.get("C"), shift=data.get("shift"))

    def to_dict(self):
        return {"B": [list(r) for r in self.B], "C": list(self.C), "shift": list(self.shift)}


def quadric_level(B, C, scale=1.0, order=None):
    """Level function ``scale*(x-c).B.(x-c) + C.(x-c)`` for a centre ``c``.

    ``order`` permutes grid coordinates into the quadric's coordinate order.
    Returns a factory ``center -> level_fn`` for :class:`LevelSetBinner`.
    """
    B = np.asarray(B, dtype=float)
    C = np.asarray(C, dtype=float)
    inverse = None if order is None else np.argsort(order)

    def at(center):
        center = np.asarray(center, dtype=float)

        def level_fn(points):
            d = (points if order is None else points[:, order]) - center
            Bd = d @ B
            level = scale * np.einsum("ij,ij->i", d, Bd) + d @ C
            grad = 2.0 * scale * Bd + C
            return level, (grad if inverse is None else grad[:, inverse])
        return level_fn
    return at


def quadric_hessian(B, scale=1.0, order=None):
    H = 2.0 * scale * np.asarray(B, dtype=float)
    if order is not None:
        inverse = np.argsort(order)
        H = H[np.ix_(inverse, inverse)]
    return H


def _binned_family(binner, level_at, centers, X, hessian):
    return np.stack([binner.marginal(level_at(c), X, hessian=hessian) for c in centers])


def quadric_tomogram(f, quadric, alpha_points=None, X=None):
    """Marginals of ``f`` over ``X = (x-alpha).B.(x-alpha) + C.(x-alpha)`` for each alpha.

    ``alpha_points`` defaults to the quadric's own shift.
    """
    if alpha_points is None:
        alpha_points = np.atleast_2d(quadric.shift)
    alpha_points = np.atleast_2d(np.asarray(alpha_points, dtype=float))
    if f.grid.ndim != quadric.dim or alpha_points.shape[1] != quadric.dim:
        raise ValueError("quadric, field and alpha points disagree on the dimension")
    binner = LevelSetBinner(f.values, f.grid)
    values = _binned_family(binner, quadric_level(quadric.matrix, quadric.linear), alpha_points,
                            X, quadric_hessian(quadric.matrix))
    names = tuple(f"alpha{j + 1}" for j in range(quadric.dim))
    return Tomogram("quadric", X, alpha_points, values, names,
                    meta={"B": quadric.to_dict()["B"], "C": list(quadric.C), "binned": True})


def quadric_backproject(coeffs, centers, weights, out_points, B, C, scale):
    """``sum_c w_c coeffs_c exp(-i [scale (x-c).B.(x-c) + C.(x-c)])`` at each output point."""
    B = np.asarray(B, dtype=float)
    C = np.asarray(C, dtype=float)
    per_center = weights * coeffs * np.exp(
        -1j * (scale * np.einsum("ij,jk,ik->i", centers, B, centers) - centers @ C))
    freq = 2.0 * scale * centers @ B
    out = np.empty(len(out_points), complex)
    for s in range(0, len(out_points), _CHUNK):
        x = out_points[s:s + _CHUNK]
        base = np.exp(-1j * (scale * np.einsum("ij,jk,ik->i", x, B, x) + x @ C))
        out[s:s + _CHUNK] = base * (np.exp(1j * x @ freq.T) @ per_center)
    return out


def _quadric_coefficients(t, eps):
    names = t.param_names
    axes, steps, coeffs = as_product_grid(t.params, unit_frequency(t.values, t.X, binned=t.binned), names)
    w = np.ones(())
    for a, h in zip(axes, steps):
        w = np.multiply.outer(w, trapezoid(a, h))
    w = w * damping(*axes, eps=eps)
    return product_params(*axes), coeffs.ravel(), w.ravel()


def quadric_inverse(t, quadric, out_grid, eps=DEFAULT_DAMPING):
    """Reconstruct ``f`` from a quadric tomogram sampled on a uniform alpha grid.

    Constant ``|det B| / pi^m``; the imaginary residual is stored in
    ``field.residual``.
    """
    if t.family != "quadric":
        raise ValueError(f"expected a quadric tomogram, got {t.family!r}")
    quadric.require_invertible()
    centers, coeffs, w = _quadric_coefficients(t, eps)
    m = quadric.dim
    f = quadric_backproject(coeffs, centers, w, out_grid.points(), quadric.matrix,
                            quadric.linear, 1.0)
    f *= abs(quadric.det) / np.pi ** m
    re, residual = real_part(f, "quadric inverse")
    return ClassicalField(out_grid, re.reshape(out_grid.shape), residual=residual)


def _deformed_level(mu, nu):
    def level_fn(points):
        q, p = points[:, 0], points[:, 1]
        grad = np.stack([mu + nu * p, nu * q], axis=1)
        return mu * q + nu * q * p, grad
    return level_fn


def deformed_radon(f, mu_points, nu_points, X, refine=4):
    """Marginals of ``f(q, p)`` over the curves ``X = mu q + nu q p`` on a (mu, nu) grid."""
    if f.grid.ndim != 2:
        raise ValueError("deformed_radon handles one (q, p) pair")
    params = product_params(mu_points, nu_points)
    binner = LevelSetBinner(f.values, f.grid, refine=refine)
    values = np.stack([
        binner.marginal(_deformed_level(mu, nu), X, hessian=[[0.0, nu], [nu, 0.0]])
        for mu, nu in params])
    return Tomogram("deformed", X, params, values, ("mu", "nu"), meta={"binned": True})


def deformed_radon_inverse(t, out_grid, q_min=DEFAULT_Q_MIN, mask=True, eps=DEFAULT_DAMPING):
    """Reconstruct ``f(q, p)`` from a deformed tomogram on a uniform (mu, nu) grid.

    The Jacobian ``|q|`` vanishes on ``q = 0``; points with ``|q| < q_min``
    are masked (value 0, ``field.mask`` True). With ``mask=False`` such points
    raise SingularRegionRequested.
    """
    if t.family != "deformed":
        raise ValueError(f"expected a deformed tomogram, got {t.family!r}")
    q, p = out_grid.coords()
    singular = np.abs(q) < q_min
    if not mask and np.any(singular):
        raise SingularRegionRequested(
            f"output grid reaches |q| < {q_min} where the inverse is singular")
    coeffs = unit_frequency(t.values, t.X, binned=t.binned)
    (mu, nu), steps, phi = as_product_grid(t.params, coeffs, ("mu", "nu"))
    phi = phi * np.multiply.outer(trapezoid(mu, steps[0]), trapezoid(nu, steps[1]))
    phi = phi * damping(mu, nu, eps=eps)
    g = np.exp(-1j * np.outer(q, mu)) @ phi          # (q, nu)
    out = np.empty((q.size, p.size), complex)
    for i, qi in enumerate(q):
        out[i] = np.exp(-1j * qi * np.outer(p, nu)) @ g[i]
    out *= np.abs(q)[:, None] / (2.0 * np.pi) ** 2
    keep = ~singular
    re, residual = real_part(out[keep], "deformed inverse")
    values = np.zeros(out.shape)
    values[keep] = re
    masked = np.broadcast_to(singular[:, None], out.shape).copy()
    return ClassicalField(out_grid, values, mask=masked, residual=residual)
