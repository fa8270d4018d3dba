"""Scikit-learn style wrappers: tomograms as a transform, inversion as its inverse."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .classical import QuadricSpec
from .quadric import QuadraticHamiltonianSymbol, quantum_quadric_inverse, quantum_quadric_tomogram
from .states import FockDensityMatrix
from .symplectic import (homodyne_invert_to_density, homodyne_tomogram, invert_to_density,
                         invert_to_wigner, symplectic_tomogram)
from .thick import (thick_invert_to_wigner, thick_quadric_inverse, thick_radon_deconvolve_invert,
                    thick_radon_tomogram, thick_symplectic_tomogram)
from .tomogram import Tomogram
from .validation import check_fields, check_grid, check_points, check_window, check_x_grid

_WIDTH = {"symplectic": 2, "homodyne": 1, "quadric": 2}


class TomogramTransformer(TransformerMixin, BaseEstimator):
    """Map Wigner fields to flattened tomograms and back.

    Parameters
    ----------
    family : {"symplectic", "homodyne", "quadric"}
    points : array-like
        Parameter points: ``(mu, nu)``, ``(theta,)`` or quadric shifts.
    X : array-like
        Uniform X grid.
    window : WindowSpec, dict or None
        Thick window; ``None`` is the singular tomogram.
    quadric_B : array-like, optional
        Quadric matrix for the quadric family (``C`` is zero).
    out_grid : PhaseSpaceGrid, optional
        Grid for :meth:`inverse_transform`; defaults to the fitted grid.
    eps : float
        Damping of the inverse quadrature.

    ``transform`` returns an array of shape ``(n_fields, n_points * len(X))``.
    """

    def __init__(self, family="symplectic", points=((1.0, 0.0),), X=None, window=None,
                 quadric_B=None, out_grid=None, eps=1e-4):
        self.family = family
        self.points = points
        self.X = X
        self.window = window
        self.quadric_B = quadric_B
        self.out_grid = out_grid
        self.eps = eps

    def _symbol(self):
        B = np.eye(2) if self.quadric_B is None else np.asarray(self.quadric_B, dtype=float)
        return QuadraticHamiltonianSymbol(QuadricSpec(B=B))

    def fit(self, fields, y=None):
        if self.family not in _WIDTH:
            raise ValueError(f"family must be one of {sorted(_WIDTH)}, got {self.family!r}")
        fields = check_fields(fields)
        self.points_ = check_points(self.points, _WIDTH[self.family])
        self.X_ = check_x_grid(self.X if self.X is not None else np.linspace(-8, 8, 321))
        self.window_ = check_window(self.window)
        self.grid_ = fields[0].grid
        self.out_grid_ = check_grid(self.out_grid) if self.out_grid is not None else self.grid_
        return self

    def tomogram(self, field):
        """The :class:`Tomogram` of one field."""
        check_is_fitted(self, "grid_")
        w = self.window_ if self.window_ is not None and self.window_.kind != "delta" else None
        if self.family == "symplectic":
            if w is not None:
                return thick_symplectic_tomogram(field, w, self.points_, self.X_)
            return symplectic_tomogram(field, self.points_, self.X_)
        if self.family == "homodyne":
            if w is not None:
                return thick_radon_tomogram(field, w, self.points_[:, 0], self.X_)
            return homodyne_tomogram(field, self.points_[:, 0], self.X_)
        return quantum_quadric_tomogram(field, self._symbol(), self.points_, self.X_, window=w)

    def transform(self, fields):
        fields = check_fields(fields)
        return np.stack([self.tomogram(f).values.ravel() for f in fields])

    def _as_tomogram(self, row):
        shape = (len(self.points_), self.X_.size)
        names = {"symplectic": ("mu", "nu"), "homodyne": ("theta",),
                 "quadric": ("mu", "nu")}[self.family]
        w = self.window_ if self.window_ is not None and self.window_.kind != "delta" else None
        # direct thick line tomograms are point samples; the rest are bin averages
        binned = self.family == "quadric" or w is None
        return Tomogram(self.family, self.X_, self.points_, np.reshape(row, shape), names,
                        window=w, meta={"binned": binned})

    def inverse_transform(self, values):
        """Wigner fields from rows of :meth:`transform` (points must form a uniform grid)."""
        check_is_fitted(self, "grid_")
        if self.family == "homodyne":
            raise NotImplementedError("homodyne rows invert to density matrices; "
                                      "use DensityReconstructor")
        out = []
        for row in np.atleast_2d(values):
            t = self._as_tomogram(row)
            if self.family == "symplectic":
                f = thick_invert_to_wigner(t, self.out_grid_, eps=self.eps) if t.is_thick else \
                    invert_to_wigner(t, self.out_grid_, eps=self.eps)
            else:
                H = self._symbol()
                f = thick_quadric_inverse(t, H, self.out_grid_, eps=self.eps) if t.is_thick else \
                    quantum_quadric_inverse(t, H, self.out_grid_, eps=self.eps)
            out.append(f)
        return out


class DensityReconstructor(BaseEstimator):
    """Density matrix from a symplectic or homodyne tomogram.

    ``fit(tomogram)`` sets ``density_``; ``score(reference)`` is the overlap
    ``Tr(rho_ref rho)``.
    """

    def __init__(self, n_max=12, eps=1e-4, r_max=8.0, dr=0.02):
        self.n_max = n_max
        self.eps = eps
        self.r_max = r_max
        self.dr = dr

    def fit(self, tomogram, y=None):
        if not isinstance(tomogram, Tomogram):
            raise TypeError("fit expects a Tomogram")
        if tomogram.family == "homodyne":
            if tomogram.is_thick:
                rho = thick_radon_deconvolve_invert(tomogram, self.n_max, r_max=self.r_max,
                                                    dr=self.dr, eps=self.eps)
            else:
                rho = homodyne_invert_to_density(tomogram, self.n_max, r_max=self.r_max,
                                                 dr=self.dr, eps=self.eps)
        elif tomogram.family == "symplectic":
            t = tomogram * tomogram.window.normalization_constant if tomogram.is_thick else tomogram
            rho = invert_to_density(t, self.n_max, eps=self.eps)
        else:
            raise ValueError(f"cannot reconstruct a density from a {tomogram.family!r} tomogram")
        self.density_ = rho
        return self

    def score(self, reference, y=None):
        check_is_fitted(self, "density_")
        ref = reference if isinstance(reference, FockDensityMatrix) else FockDensityMatrix(reference)
        return self.density_.fidelity(ref)
