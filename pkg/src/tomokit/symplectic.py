"""Symplectic, homodyne and center-of-mass tomograms of Wigner functions, and their inverses.

Every inverse reads the tomogram through its X-Fourier coefficient: by
homogeneity ``int T(X, k) exp(i t X) dX`` is the characteristic function at
``t k``, so the triple integrals collapse onto characteristic-function
planes that are inverted with separable Fourier sums.
"""

import numpy as np

from ._binning import LevelSetBinner, bin_layout, histogram, spreading_matrix
from ._fourier import (DEFAULT_DAMPING, as_product_grid, damping, fourier_weights, real_part,
                       trapezoid, uniform_axis, unit_frequency)
from ._operators import basis_size, polar, quadrature_function
from .exceptions import MissingParameterPoint, NonPhysicalResult, TruncationTooSmall
from .grids import PhaseSpaceGrid, WignerField, check_support
from .states import FockDensityMatrix, quadrature_density
from .tomogram import Tomogram

TRACE_TOLERANCE = 1e-3
NEGATIVITY_TOLERANCE = 1e-3
DEGENERATE_LENGTH = 1e-9


def _linear_level(mu, nu):
    direction = np.array([mu, nu], dtype=float)

    def level_fn(points):
        return points @ direction, np.broadcast_to(direction, points.shape)
    return level_fn


def _single_mode(W):
    if W.grid.ndim != 2:
        raise ValueError("expected a single-mode Wigner field")
    check_support(W.values, "Wigner function")
    return LevelSetBinner(W.values / (2.0 * np.pi), W.grid)


def symplectic_tomogram(W, mu_nu_points, X):
    """Marginals of ``W / 2pi`` over the lines ``X = mu q + nu p``."""
    params = np.atleast_2d(np.asarray(mu_nu_points, dtype=float))
    binner = _single_mode(W)
    values = np.stack([binner.marginal(_linear_level(mu, nu), X) for mu, nu in params])
    return Tomogram("symplectic", X, params, values, ("mu", "nu"), meta={"binned": True})


def symplectic_tomogram_from_density(rho, mu_nu_points, X):
    """Point values ``quadrature_density(X / r, theta) / r`` straight from a density matrix.

    At ``(mu, nu) = (0, 0)`` the profile is ``delta(X)``; its unit mass is
    split linearly between the two X nodes around zero.
    """
    params = np.atleast_2d(np.asarray(mu_nu_points, dtype=float))
    r, theta = polar(params[:, 0], params[:, 1])
    X = np.asarray(X, dtype=float)
    values = np.zeros((len(params), X.size))
    for i, (ri, ti) in enumerate(zip(r, theta)):
        if ri > DEGENERATE_LENGTH:
            values[i] = quadrature_density(rho, X / ri, ti) / ri
            continue
        x0, dx, nbins = bin_layout(X)
        pos = -X[0] / dx
        if not 0 <= pos <= nbins - 1:
            raise ValueError("X grid must contain 0 to sample (mu, nu) = (0, 0)")
        lo = min(int(np.floor(pos)), nbins - 2)
        frac = pos - lo
        values[i, lo] = (1.0 - frac) / dx
        values[i, lo + 1] += frac / dx
    return Tomogram("symplectic", X, params, values, ("mu", "nu"))


def homodyne_tomogram(W, theta, X):
    """Quadrature distributions of ``Q cos(theta) + P sin(theta)``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    binner = _single_mode(W)
    values = np.stack([binner.marginal(_linear_level(np.cos(t), np.sin(t)), X) for t in theta])
    return Tomogram("homodyne", X, theta[:, None], values, ("theta",), meta={"binned": True})


def homodyne_from_symplectic(t, r, theta):
    """Homodyne profile at ``theta`` from the symplectic sample at ``r (cos, sin)(theta)``.

    Uses degree -1 homogeneity, ``R(X, theta) = r W(r X, r cos, r sin)``,
    and returns it on the exact grid ``X / r``: ``(X_grid, values)``.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    profile = t.profile((r * np.cos(theta), r * np.sin(theta)))
    return t.X / r, r * profile


def _characteristic_plane(t):
    """Characteristic-function samples on the (mu, nu) grid with quadrature weights."""
    if t.family != "symplectic":
        raise ValueError(f"expected a symplectic tomogram, got {t.family!r}")
    coeffs = unit_frequency(t.values, t.X, binned=t.binned)
    (mu, nu), steps, chi = as_product_grid(t.params, coeffs, ("mu", "nu"))
    weights = np.multiply.outer(trapezoid(mu, steps[0]), trapezoid(nu, steps[1]))
    return mu, nu, chi, weights


def backproject_plane(mu, nu, chi, weights, out_grid, scale=1.0, eps=DEFAULT_DAMPING):
    """``scale/2pi * sum chi(mu, nu) exp(-i (mu q + nu p))`` on ``out_grid``."""
    q, p = out_grid.coords()
    c = chi * weights * damping(mu, nu, eps=eps)
    w = np.exp(-1j * np.outer(q, mu)) @ c @ np.exp(-1j * np.outer(nu, p))
    return w * scale / (2.0 * np.pi)


def invert_to_wigner(t, out_grid, eps=DEFAULT_DAMPING, scale=1.0):
    """Wigner function from a symplectic tomogram on a uniform (mu, nu) grid."""
    mu, nu, chi, weights = _characteristic_plane(t)
    w = backproject_plane(mu, nu, chi, weights, out_grid, scale, eps)
    re, residual = real_part(w, "symplectic inverse")
    return WignerField(out_grid, re, residual=residual)


def _finish_density(rho, extra=None):
    trace = complex(np.trace(rho))
    herm = 0.5 * (rho + rho.conj().T)
    deviation = float(np.max(np.abs(rho - herm)))
    low = float(np.linalg.eigvalsh(herm).min())
    diagnostics = {"trace": trace.real, "trace_imag": trace.imag,
                   "hermitian_deviation": deviation, "min_eigenvalue": low}
    diagnostics.update(extra or {})
    if low < -NEGATIVITY_TOLERANCE:
        raise NonPhysicalResult(f"reconstructed density has eigenvalue {low:.3g}")
    if abs(trace.real - 1.0) > 10 * TRACE_TOLERANCE:
        raise TruncationTooSmall(f"reconstructed trace {trace.real:.6f} is far from 1")
    return FockDensityMatrix(herm / trace.real, check=False, diagnostics=diagnostics)


def invert_to_density(t, n_max, eps=DEFAULT_DAMPING, dim=None):
    """Density matrix from a symplectic tomogram: ``(1/2pi) sum chi exp(-i (mu Q + nu P))``.

    The operator exponentials are evaluated spectrally on a basis of ``dim``
    states (default sized to the largest ``|(mu, nu)|``) and cropped.
    """
    mu, nu, chi, weights = _characteristic_plane(t)
    M, N = np.meshgrid(mu, nu, indexing="ij")
    r, theta = polar(M.ravel(), N.ravel())
    c = (chi * weights * damping(mu, nu, eps=eps)).ravel()
    dim = dim or basis_size(n_max, float(r.max()))
    blocks = quadrature_function(lambda v: np.exp(-1j * v), r, theta, n_max, dim)
    rho = np.tensordot(c, blocks, axes=1) / (2.0 * np.pi)
    return _finish_density(rho, {"basis": dim, "damping": eps})


def _full_circle(t):
    """Homodyne profiles over a uniform angle grid covering [0, 2 pi)."""
    theta = t.params[:, 0]
    order = np.argsort(theta)
    theta, values = theta[order], t.values[order]
    u, step = uniform_axis(theta, "theta")
    if u.size != theta.size:
        raise MissingParameterPoint("repeated homodyne angles")
    n = int(round(2 * np.pi / step))
    if abs(n * step - 2 * np.pi) > 1e-9:
        raise MissingParameterPoint("angle step does not divide the full circle")
    if u.size == n and abs(u[0]) < 1e-12:
        return theta, values, step, t.X
    if u.size == n // 2 and abs(u[0]) < 1e-12 and n % 2 == 0 and np.allclose(t.X, -t.X[::-1]):
        # R(X, theta + pi) = R(-X, theta)
        return (np.concatenate([theta, theta + np.pi]),
                np.concatenate([values, values[:, ::-1]]), step, t.X)
    raise MissingParameterPoint("homodyne angles must start at 0 and cover [0, pi) or [0, 2 pi)")


def radial_nodes(r_max, dr):
    """Nodes and weights for ``int_0^r_max r g(r) dr``.

    Trapezoid weights times ``r``, plus the Euler-Maclaurin end correction
    ``dr^2/12 * g(0)`` that the vanishing integrand at ``r = 0`` otherwise drops.
    """
    n = int(round(r_max / dr))
    r = np.arange(n + 1) * dr
    w = trapezoid(r, dr) * r
    w[0] = dr ** 2 / 12.0
    return r, w


def homodyne_invert_to_density(h, n_max, r_max=8.0, dr=0.02, eps=DEFAULT_DAMPING, dim=None,
                               transfer=None):
    """Density matrix from a homodyne tomogram by the polar inversion.

    ``rho = (1/2pi) int r dr dtheta chi(r, theta) exp(-i r Q_theta)`` with
    ``chi(r, theta) = int R(X, theta) exp(i r X) dX``. ``transfer(r)``, if
    given, divides ``chi`` (thick-window deconvolution).
    """
    if h.family != "homodyne":
        raise ValueError(f"expected a homodyne tomogram, got {h.family!r}")
    theta, values, dtheta, X = _full_circle(h)
    r, rw = radial_nodes(r_max, dr)
    chi = unit_frequency(values, X, r, binned=h.binned)     # (theta, r)
    if transfer is not None:
        chi = chi / transfer(r)[None, :]
    chi = chi * np.exp(-eps * r ** 2)[None, :]
    d = np.arange(-n_max, n_max + 1)
    harmonics = np.exp(1j * np.outer(d, theta)) @ chi * dtheta    # (d, r)
    dim = dim or basis_size(n_max, r_max)
    radial = quadrature_function(lambda v: np.exp(-1j * v), r, np.zeros_like(r), n_max, dim)
    idx = np.subtract.outer(np.arange(n_max + 1), np.arange(n_max + 1)) + n_max
    rho = np.einsum("r,mnr,rmn->mn", rw, harmonics[idx], radial) / (2.0 * np.pi)
    return _finish_density(rho, {"basis": dim, "damping": eps, "r_max": r_max})


# two modes ---------------------------------------------------------------

def _mode_grids(W2):
    if W2.grid.ndim != 4:
        raise ValueError("expected a two-mode Wigner field")
    check_support(W2.values, "two-mode Wigner function")
    g1 = PhaseSpaceGrid(W2.grid.axes[:2])
    g2 = PhaseSpaceGrid(W2.grid.axes[2:])
    return g1, g2


def _mode_spreader(grid, X):
    """``(mu, nu) -> sparse (points, bins)`` tent spreading for one mode."""
    pts = grid.points()
    steps = grid.steps
    x0, dx, nbins = bin_layout(X)
    cache = {}

    def get(mu, nu):
        key = (float(mu), float(nu))
        if key not in cache:
            a = np.abs(mu) * steps[0]
            b = np.abs(nu) * steps[1]
            cache[key] = spreading_matrix(pts @ np.array(key), max(a, b), min(a, b), x0, dx, nbins)
        return cache[key]
    return get


def _joint_histograms(W2, params, X1, X2):
    """Joint bin masses of ``(mu1 q1 + nu1 p1, mu2 q2 + nu2 p2)`` for each parameter row."""
    g1, g2 = _mode_grids(W2)
    mass = W2.values.reshape(g1.points().shape[0], -1) * W2.grid.cell_volume / (2 * np.pi) ** 2
    s1, s2 = _mode_spreader(g1, X1), _mode_spreader(g2, X2)
    out = np.empty((len(params), X1.size, X2.size))
    second = {}
    for i, (m1, n1, m2, n2) in enumerate(params):
        key = (float(m2), float(n2))
        if key not in second:
            second[key] = (s2(m2, n2).T @ mass.T).T           # (points1, bins2)
        out[i] = s1(m1, n1).T @ second[key]
    return out


def two_mode_tomogram(W2, params, X1, X2):
    """Joint tomogram with one line constraint per mode, parameters ``(mu1, nu1, mu2, nu2)``."""
    params = np.atleast_2d(np.asarray(params, dtype=float))
    X1 = np.asarray(X1, dtype=float)
    X2 = np.asarray(X2, dtype=float)
    masses = _joint_histograms(W2, params, X1, X2)
    dx1 = bin_layout(X1)[1]
    dx2 = bin_layout(X2)[1]
    return Tomogram("two_mode", X1, params, masses / (dx1 * dx2),
                    ("mu1", "nu1", "mu2", "nu2"), X2=X2, meta={"binned": True})


def _direction_key(mu, nu):
    theta, length = _signed_direction(mu, nu)
    return float(length), float(theta)


def com_tomogram(W2, params, X, aux_step=None):
    """Center-of-mass tomogram over ``X = mu1 q1 + nu1 p1 + mu2 q2 + nu2 p2``.

    Each parameter row is split into unit directions per mode and two
    lengths; the joint quadrature histogram for the directions is projected
    onto ``r1 Y1 + r2 Y2`` (box-in-bin model of the joint bins).
    """
    params = np.atleast_2d(np.asarray(params, dtype=float))
    X = np.asarray(X, dtype=float)
    g1, g2 = _mode_grids(W2)
    x0, dx, nbins = bin_layout(X)
    h = aux_step or dx
    reach = max(np.hypot(*[max(abs(a.min), abs(a.max)) for a in g.axes]) for g in (g1, g2))
    m = int(np.ceil(reach / h)) + 2
    Y = np.arange(-m, m + 1) * h
    keys = [(_direction_key(a, b), _direction_key(c, d)) for a, b, c, d in params]
    pairs = sorted({(k1[1], k2[1]) for k1, k2 in keys})
    unit = np.array([(np.cos(t1), np.sin(t1), np.cos(t2), np.sin(t2)) for t1, t2 in pairs])
    joint = dict(zip(pairs, _joint_histograms(W2, unit, Y, Y)))
    Y1, Y2 = np.meshgrid(Y, Y, indexing="ij")
    values = np.empty((len(params), X.size))
    for i, ((r1, t1), (r2, t2)) in enumerate(keys):
        hist = joint[(t1, t2)]
        a, b = abs(r1) * h, abs(r2) * h
        values[i] = histogram(r1 * Y1.ravel() + r2 * Y2.ravel(), hist.ravel(),
                              max(a, b), min(a, b), x0, dx, nbins) / dx
    return Tomogram("center_of_mass", X, params, values, ("mu1", "nu1", "mu2", "nu2"),
                    meta={"binned": True})


def _angle_axis(theta, name):
    """Uniform angles covering [0, pi) once (any offset below one step)."""
    u, step = uniform_axis(theta, name)
    if u[0] < -1e-12 or u[0] >= step - 1e-12 or abs(u.size * step - np.pi) > 1e-9:
        raise MissingParameterPoint(f"{name} must be a uniform grid covering [0, pi)")
    return u, step


def _signed_direction(mu, nu):
    """Angle in [0, pi) and signed length with ``(mu, nu) = length * n(angle)``."""
    theta = np.round(np.mod(np.arctan2(nu, mu), np.pi), 10)
    theta = np.where(np.isclose(theta, np.pi), 0.0, theta)
    return theta, mu * np.cos(theta) + nu * np.sin(theta)


def _radial_axis(t_max, dt):
    n = int(round(t_max / dt))
    t = np.arange(-n, n + 1) * dt
    return t, trapezoid(t, dt)


def _projections(grid, theta):
    """``q cos theta + p sin theta`` for every grid point and angle."""
    pts = grid.points()
    return pts[:, :1] * np.cos(theta)[None, :] + pts[:, 1:] * np.sin(theta)[None, :]


def _split_modes(out_grid):
    if out_grid.ndim != 4:
        raise ValueError("output grid must be two-mode")
    return PhaseSpaceGrid(out_grid.axes[:2]), PhaseSpaceGrid(out_grid.axes[2:])


def two_mode_invert_to_wigner(t, out_grid, t_max=6.0, dt=0.1, eps=DEFAULT_DAMPING):
    """Two-mode Wigner function from a joint tomogram over pairs of mode directions.

    Parameter rows ``(l1 n(th1), l2 n(th2))`` with nonzero lengths and the
    angles on product grids covering [0, pi). The characteristic function on
    ``(t1 n(th1), t2 n(th2))`` is inverted with the polar Jacobian
    ``|t1 t2|`` and the ``1/(2 pi)^2`` constant.
    """
    if t.family != "two_mode":
        raise ValueError(f"expected a two-mode tomogram, got {t.family!r}")
    th1, l1 = _signed_direction(t.params[:, 0], t.params[:, 1])
    th2, l2 = _signed_direction(t.params[:, 2], t.params[:, 3])
    if np.any(l1 == 0) or np.any(l2 == 0):
        raise ValueError("two-mode inversion needs nonzero directions in both modes")
    a1, d1 = _angle_axis(th1, "theta1")
    a2, d2 = _angle_axis(th2, "theta2")
    tt, tw = _radial_axis(t_max, dt)
    chi = np.empty((len(t.params), tt.size, tt.size), complex)
    for i in range(len(t.params)):
        e1 = fourier_weights(t.X, tt / l1[i], t.binned)
        e2 = fourier_weights(t.X2, tt / l2[i], t.binned)
        chi[i] = e1.T @ t.values[i] @ e2
    _, _, chi = as_product_grid(np.stack([th1, th2], axis=1), chi, ("theta1", "theta2"))
    radial = np.abs(tt) * tw * np.exp(-eps * tt ** 2)
    chi = chi * (d1 * d2) * radial[None, None, :, None] * radial[None, None, None, :]
    g1, g2 = _split_modes(out_grid)
    e1 = np.exp(-1j * _projections(g1, a1)[:, :, None] * tt).reshape(len(g1.points()), -1)
    e2 = np.exp(-1j * _projections(g2, a2)[:, :, None] * tt).reshape(len(g2.points()), -1)
    core = chi.transpose(0, 2, 1, 3).reshape(e1.shape[1], e2.shape[1])
    w = (e1 @ core @ e2.T) / (2.0 * np.pi) ** 2
    re, residual = real_part(w, "two-mode inverse")
    return WignerField(out_grid, re.reshape(out_grid.shape), residual=residual)


def com_invert_to_wigner(t, out_grid, t_max=6.0, dt=0.1, eps=DEFAULT_DAMPING):
    """Two-mode Wigner function from a center-of-mass tomogram.

    Parameter rows ``l (cos psi n(th1), sin psi n(th2))`` over product grids
    of ``th1, th2, psi`` covering [0, pi); ``psi`` must avoid 0 and pi/2
    (a midpoint grid does). Jacobian ``|t|^3 |cos psi sin psi|``.
    """
    if t.family != "center_of_mass":
        raise ValueError(f"expected a center-of-mass tomogram, got {t.family!r}")
    th1, u1 = _signed_direction(t.params[:, 0], t.params[:, 1])
    th2, u2 = _signed_direction(t.params[:, 2], t.params[:, 3])
    if np.any(u1 == 0) or np.any(u2 == 0):
        raise ValueError("center-of-mass inversion needs psi away from 0 and pi/2")
    psi, length = _signed_direction(u1, u2)
    a1, d1 = _angle_axis(th1, "theta1")
    a2, d2 = _angle_axis(th2, "theta2")
    ap, dp = _angle_axis(psi, "psi")
    tt, tw = _radial_axis(t_max, dt)
    chi = np.stack([unit_frequency(t.values[i], t.X, tt / length[i], binned=t.binned)
                    for i in range(len(t.params))])
    _, _, chi = as_product_grid(np.stack([th1, th2, psi], axis=1), chi,
                                ("theta1", "theta2", "psi"))
    radial = np.abs(tt) ** 3 * tw * np.exp(-eps * tt ** 2)
    chi = chi * (d1 * d2 * dp) * (np.abs(np.cos(ap) * np.sin(ap))[:, None] * radial)
    g1, g2 = _split_modes(out_grid)
    s1, s2 = _projections(g1, a1), _projections(g2, a2)
    w = np.zeros((len(s1), len(s2)), complex)
    for k, angle in enumerate(ap):
        k1 = np.exp(-1j * np.cos(angle) * s1[:, :, None] * tt)        # (z1, th1, t)
        k2 = np.exp(-1j * np.sin(angle) * s2[:, :, None] * tt)        # (z2, th2, t)
        half = np.einsum("zat,abt->zbt", k1, chi[:, :, k, :], optimize=True)
        w += half.reshape(len(s1), -1) @ k2.reshape(len(s2), -1).T
    w /= (2.0 * np.pi) ** 2
    re, residual = real_part(w, "center-of-mass inverse")
    return WignerField(out_grid, re.reshape(out_grid.shape), residual=residual)
