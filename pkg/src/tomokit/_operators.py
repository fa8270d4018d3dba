"""Spectral evaluation of functions of rotated quadratures on a truncated basis.

``mu Q + nu P = r Q_theta`` with ``Q_theta = exp(i theta N) Q exp(-i theta N)``,
so any function of it follows from one eigendecomposition of ``Q`` plus a
phase ``exp(i theta (m - n))`` on matrix element ``(m, n)``.
"""

from functools import lru_cache

import numpy as np

from .states import quadrature_operators


def basis_size(n_max, r_max):
    """Basis large enough that ``exp(-i r Q)`` is exact on the first ``n_max+1`` states."""
    reach = r_max / np.sqrt(2.0)
    return max(2 * (n_max + 1), n_max + 1 + int(np.ceil(0.5 * r_max ** 2 + 8.0 * reach + 20)))


@lru_cache(maxsize=8)
def _eigensystem(dim):
    q, _ = quadrature_operators(dim - 1, buffer=0)
    x, v = np.linalg.eigh(q.real)
    return x, v


def quadrature_eigensystem(dim):
    x, v = _eigensystem(int(dim))
    return x.copy(), v.copy()


def rotation_phases(theta, n_keep):
    """``exp(i theta (m - n))`` for each angle, shape ``(len(theta), n_keep, n_keep)``."""
    d = np.subtract.outer(np.arange(n_keep), np.arange(n_keep))
    return np.exp(1j * np.multiply.outer(np.asarray(theta, dtype=float), d))


def quadrature_function(fn, r, theta, n_max, dim):
    """Blocks ``fn(r * Q_theta)`` on the first ``n_max+1`` states.

    ``fn`` acts elementwise on the eigenvalues, ``fn(values)`` with
    ``values`` of shape ``(len(r), dim)``.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    x, v = _eigensystem(int(dim))
    vk = v[: n_max + 1]
    spectrum = fn(np.multiply.outer(r, x))
    blocks = np.einsum("mk,pk,nk->pmn", vk, spectrum, vk, optimize=True)
    return blocks * rotation_phases(theta, n_max + 1)


def polar(mu, nu):
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    return np.hypot(mu, nu), np.arctan2(nu, mu)
