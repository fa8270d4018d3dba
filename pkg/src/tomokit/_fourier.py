"""Parameter grids and the Fourier sums used by the inverse transforms."""

import numpy as np

from .exceptions import ImagResidualTooLarge, MissingParameterPoint

DEFAULT_DAMPING = 1e-4
IMAG_TOLERANCE = 1e-3


def product_params(*axes):
    """Tensor-product parameter points, C order, shape ``(n, len(axes))``."""
    mesh = np.meshgrid(*[np.asarray(a, dtype=float) for a in axes], indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def uniform_axis(values, name):
    """Sorted unique values of one parameter column; must be uniform."""
    u = np.unique(np.round(values, 12))
    if u.size < 2:
        return u, 1.0
    step = (u[-1] - u[0]) / (u.size - 1)
    if np.max(np.abs(np.diff(u) - step)) > 1e-9 * max(1.0, abs(step)):
        raise MissingParameterPoint(f"parameter {name!r} is not sampled on a uniform grid")
    return u, step


def as_product_grid(params, data, names):
    """Reorder ``data`` (leading axis over ``params``) onto a full tensor grid.

    Returns ``(axes, steps, gridded)`` with ``gridded.shape = axis sizes + data.shape[1:]``.
    Raises MissingParameterPoint unless every grid node is present exactly once.
    """
    axes, steps, index = [], [], []
    for j, name in enumerate(names):
        u, step = uniform_axis(params[:, j], name)
        axes.append(u)
        steps.append(step)
        k = np.rint((params[:, j] - u[0]) / step).astype(np.int64) if u.size > 1 else \
            np.zeros(len(params), np.int64)
        index.append(k)
    shape = tuple(a.size for a in axes)
    flat = np.ravel_multi_index(index, shape)
    if flat.size != int(np.prod(shape)) or np.unique(flat).size != flat.size:
        raise MissingParameterPoint(
            f"parameter points do not form a complete {'x'.join(map(str, shape))} grid")
    gridded = np.empty(shape + data.shape[1:], dtype=data.dtype)
    gridded.reshape((-1,) + data.shape[1:])[flat] = data
    return axes, np.array(steps), gridded


def trapezoid(axis, step):
    w = np.full(axis.size, step)
    w[0] = w[-1] = 0.5 * step
    return w


def unit_frequency(values, X, freq=1.0, binned=False):
    """``sum_k values[..., k] exp(i freq X_k) dX``: the X-Fourier coefficient at ``freq``.

    ``binned`` marks values that are bin averages rather than point samples;
    the sum then carries the bin's ``sinc(freq dX / 2)`` factor, which is
    divided out.
    """
    return np.tensordot(values, fourier_weights(X, freq, binned), axes=([-1], [0]))


def fourier_weights(X, freq, binned=False):
    """Quadrature weights ``exp(i freq X) dX``, shape ``X.shape + freq.shape``."""
    dx = (X[-1] - X[0]) / (X.size - 1)
    phase = np.exp(1j * np.multiply.outer(X, freq)) * dx
    if binned:
        phase = phase / np.sinc(np.asarray(freq) * dx / (2.0 * np.pi))
    return phase


def damping(*coords, eps=DEFAULT_DAMPING):
    """Gaussian tail damping ``exp(-eps |k|^2)`` on a tensor grid of coordinates."""
    total = 0.0
    for c in np.meshgrid(*coords, indexing="ij"):
        total = total + c ** 2
    return np.exp(-eps * total)


def real_part(field, what="reconstruction", tolerance=IMAG_TOLERANCE):
    """Real part of ``field``; raise when the imaginary residual is too large.

    Returns ``(real, residual)`` where residual = max|Im| / max|Re|.
    """
    re = np.real(field)
    scale = float(np.max(np.abs(re))) if re.size else 0.0
    im = float(np.max(np.abs(np.imag(field)))) if re.size else 0.0
    residual = im / scale if scale > 0 else (0.0 if im == 0 else np.inf)
    if residual > tolerance:
        raise ImagResidualTooLarge(f"{what}: imaginary residual {residual:.3g} exceeds {tolerance}")
    return re, residual
