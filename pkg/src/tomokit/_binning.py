"""Histogram marginals of gridded densities along level sets.

The gridded density is read as its bilinear (tent) interpolant. Across a
cell the level function is linearized, so each grid point's mass spreads
over X as the projection of a tent: a symmetric piecewise-quartic kernel,
the law of a sum of four uniforms with half-widths ``h_d |dH/dx_d| / 2``.
For a linear level function this is the exact marginal of the interpolant,
and the kernel's Fourier zeros on the reciprocal lattice remove the
aliasing noise of plain point binning. Cells near critical points of a
curved level function are subdivided before spreading.
"""

import math

import numpy as np
from numba import njit
from scipy import sparse

MIN_HALF_WIDTH = 1e-6  # in units of the bin width
MIN_WIDTH_RATIO = 1e-3
def half_widths(grad, steps):
    """Kernel half-widths ``(a, b)``, ``a >= b``, for cells with the given gradients.

    Above two dimensions the trailing tents are folded into the second one
    with matched variance.
    """
    w = np.abs(grad) * np.asarray(steps)  # steps: (ndim,) or per-row
    if w.shape[1] == 1:
        return w[:, 0], np.zeros(len(w))
    w = np.sort(w, axis=1)
    return w[:, -1], np.sqrt(np.sum(w[:, :-1] ** 2, axis=1))


@njit(cache=True, nogil=True)
def _cdf(x, a, b):
    if x <= -(a + b):
        return 0.0
    if x >= a + b:
        return 1.0
    acc = 0.0
    for i in range(-1, 2):
        wi = -2.0 if i == 0 else 1.0
        for j in range(-1, 2):
            wj = -2.0 if j == 0 else 1.0
            t = x + i * a + j * b
            if t > 0.0:
                t *= t
                acc += wi * wj * t * t
    acc /= 24.0 * (a * b) ** 2
    return min(max(acc, 0.0), 1.0)


@njit(cache=True, nogil=True)
def _footprints(centers, a, b, x0, dx, nbins, out_rows, out_cols, out_vals, count_only):
    floor = MIN_HALF_WIDTH * dx
    n_out = 0
    for p in range(centers.size):
        c = centers[p]
        if a[p] + b[p] <= floor:
            k = int(math.ceil((c - x0) / dx)) - 1
            if 0 <= k < nbins:
                if not count_only:
                    out_rows[n_out] = p
                    out_cols[n_out] = k
                    out_vals[n_out] = 1.0
                n_out += 1
            continue
        aa = max(max(a[p], b[p]), floor)
        bb = max(min(a[p], b[p]), MIN_WIDTH_RATIO * aa)
        lo = int(math.floor((c - aa - bb - x0) / dx))
        hi = int(math.floor((c + aa + bb - x0) / dx))
        k0 = max(lo, 0)
        k1 = min(hi, nbins - 1)
        if k1 < k0:
            continue
        prev = _cdf(x0 + k0 * dx - c, aa, bb)
        for k in range(k0, k1 + 1):
            cur = _cdf(x0 + (k + 1) * dx - c, aa, bb)
            frac = cur - prev
            prev = cur
            if frac != 0.0:
                if not count_only:
                    out_rows[n_out] = p
                    out_cols[n_out] = k
                    out_vals[n_out] = frac
                n_out += 1
    return n_out


@njit(cache=True, nogil=True)
def _accumulate(centers, mass, a, b, x0, dx, nbins):
    hist = np.zeros(nbins)
    floor = MIN_HALF_WIDTH * dx
    for p in range(centers.size):
        c = centers[p]
        m = mass[p]
        if a[p] + b[p] <= floor:
            k = int(math.ceil((c - x0) / dx)) - 1
            if 0 <= k < nbins:
                hist[k] += m
            continue
        aa = max(max(a[p], b[p]), floor)
        bb = max(min(a[p], b[p]), MIN_WIDTH_RATIO * aa)
        lo = int(math.floor((c - aa - bb - x0) / dx))
        hi = int(math.floor((c + aa + bb - x0) / dx))
        k0 = max(lo, 0)
        k1 = min(hi, nbins - 1)
        if k1 < k0:
            continue
        prev = _cdf(x0 + k0 * dx - c, aa, bb)
        for k in range(k0, k1 + 1):
            cur = _cdf(x0 + (k + 1) * dx - c, aa, bb)
            hist[k] += m * (cur - prev)
            prev = cur
    return hist


def _as_arrays(centers, a, b):
    centers = np.ascontiguousarray(centers, dtype=float).ravel()
    a = np.ascontiguousarray(np.broadcast_to(a, centers.shape), dtype=float)
    b = np.ascontiguousarray(np.broadcast_to(b, centers.shape), dtype=float)
    return centers, a, b


def spread(centers, mass, a, b, x0, dx, nbins):
    """Spread point masses into uniform bins ``[x0 + k dx, x0 + (k+1) dx)``.

    Returns COO triplets ``(point_index, bin_index, mass_fraction * mass)``.
    Points whose spread is zero land wholly in one bin; a point exactly on a
    bin edge goes to the lower bin.
    """
    centers, a, b = _as_arrays(centers, a, b)
    mass = np.ascontiguousarray(np.broadcast_to(mass, centers.shape), dtype=float)
    empty_i = np.zeros(0, np.int64)
    n = _footprints(centers, a, b, float(x0), float(dx), int(nbins),
                    empty_i, empty_i, np.zeros(0), True)
    rows = np.empty(n, np.int64)
    cols = np.empty(n, np.int64)
    vals = np.empty(n)
    _footprints(centers, a, b, float(x0), float(dx), int(nbins), rows, cols, vals, False)
    return rows, cols, vals * mass[rows]


def histogram(centers, mass, a, b, x0, dx, nbins):
    """Bin masses (not densities) of spread point masses."""
    centers, a, b = _as_arrays(centers, a, b)
    mass = np.ascontiguousarray(np.broadcast_to(mass, centers.shape), dtype=float)
    return _accumulate(centers, mass, a, b, float(x0), float(dx), int(nbins))


def spreading_matrix(centers, a, b, x0, dx, nbins):
    """Sparse ``(n_points, nbins)`` matrix of bin fractions for unit masses."""
    n = np.size(centers)
    rows, cols, vals = spread(centers, 1.0, a, b, x0, dx, nbins)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, nbins))


def bin_layout(X):
    """``(x0, dx, nbins)`` for bins centred on the uniform grid ``X``."""
    X = np.asarray(X, dtype=float)
    dx = (X[-1] - X[0]) / (X.size - 1)
    return X[0] - 0.5 * dx, dx, X.size


class LevelSetBinner:
    """Marginals of one gridded density over the level sets of many functions.

    Parameters
    ----------
    density : ndarray or None
        Values on ``grid`` (any measure factors already applied). ``None``
        keeps every grid point with unit weight, for :meth:`spreading`.
    grid : PhaseSpaceGrid
    refine : int
        Subdivision factor for cells near critical points of quadratic levels.
    """

    def __init__(self, density, grid, refine=16):
        self.grid = grid
        self.steps = grid.steps
        pts = grid.points()
        if density is None:
            mass = np.ones(len(pts))
        else:
            mass = np.asarray(density, dtype=float).ravel() * grid.cell_volume
        keep = np.nonzero(mass != 0.0)[0]
        self.points = pts[keep]
        self.mass = mass[keep]
        self.index = keep
        self.refine = refine

    def _spread_inputs(self, level_fn, hessian):
        steps, pts, mass = self.steps, self.points, self.mass
        parent = np.arange(len(pts))
        level, grad = level_fn(pts)
        cell = np.broadcast_to(steps, pts.shape)
        if hessian is not None:
            hessian = np.asarray(hessian, dtype=float)
            hnorm = np.max(np.abs(np.linalg.eigvalsh(hessian)))
            if hnorm > 0 and self.refine > 1:
                near = np.max(np.abs(grad) * steps, axis=1) < 4.0 * hnorm * float(np.max(steps)) ** 2
                if np.any(near):
                    sub_pts, sub_mass, sub_parent = _subdivide(pts[near], mass[near], steps,
                                                               self.refine)
                    sub_level, sub_grad = level_fn(sub_pts)
                    level = np.concatenate([level[~near], sub_level])
                    grad = np.concatenate([grad[~near], sub_grad])
                    mass = np.concatenate([mass[~near], sub_mass])
                    parent = np.concatenate([parent[~near], np.nonzero(near)[0][sub_parent]])
                    cell = np.concatenate([cell[~near],
                                           np.broadcast_to(steps / self.refine, sub_pts.shape)])
            # mean of the quadratic part of the level function under the tent
            level = level + np.sum(np.diag(hessian) * cell ** 2, axis=1) / 12.0
        a, b = half_widths(grad, cell)
        return level, mass, a, b, parent

    def marginal(self, level_fn, X, hessian=None):
        """Histogram density of the level values on the bin centres ``X``.

        ``level_fn(points) -> (level, grad)`` for points of shape ``(n, ndim)``.
        ``hessian`` (constant) enables the cell-mean level correction and the
        subdivision of cells near critical points.
        """
        x0, dx, nbins = bin_layout(X)
        level, mass, a, b, _ = self._spread_inputs(level_fn, hessian)
        return histogram(level, mass, a, b, x0, dx, nbins) / dx

    def spreading(self, level_fn, X, hessian=None):
        """Sparse ``(grid points, bins)`` matrix of bin fractions.

        Row ``i`` splits a unit mass at grid point ``i`` over the bins, so
        ``S.T @ (density * cell_volume) / dx`` is the marginal density.
        Build the binner with ``density=None`` for this.
        """
        x0, dx, nbins = bin_layout(X)
        level, mass, a, b, parent = self._spread_inputs(level_fn, hessian)
        rows, cols, vals = spread(level, mass, a, b, x0, dx, nbins)
        n = int(np.prod(self.grid.shape))
        return sparse.csr_matrix((vals, (self.index[parent[rows]], cols)), shape=(n, nbins))


def level_set_marginal(density, grid, level_fn, X, hessian=None, refine=16):
    """One-shot :meth:`LevelSetBinner.marginal`."""
    return LevelSetBinner(density, grid, refine).marginal(level_fn, X, hessian)


def _subdivide(pts, mass, steps, s):
    """Refine tent-interpolated masses onto tents ``s`` times narrower (exact)."""
    ndim = pts.shape[1]
    k = np.arange(-(s - 1), s)
    w1 = (1.0 - np.abs(k) / s) / s
    offs = np.meshgrid(*[k * h / s for h in steps], indexing="ij")
    local = np.stack([o.ravel() for o in offs], axis=1)
    w = np.ones(())
    for _ in range(ndim):
        w = np.multiply.outer(w, w1)
    sub = (pts[:, None, :] + local[None, :, :]).reshape(-1, ndim)
    parent = np.repeat(np.arange(len(pts)), len(local))
    return sub, (mass[:, None] * w.ravel()[None, :]).ravel(), parent
