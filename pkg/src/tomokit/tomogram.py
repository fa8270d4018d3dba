"""The tomogram container shared by every family."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import MissingParameterPoint
from .grids import check_uniform

FAMILIES = ("quadric", "deformed", "symplectic", "homodyne", "center_of_mass",
            "two_mode", "multipartite_quadric")


@dataclass
class Tomogram:
    """Samples of a tomogram over a list of parameter points and a uniform X grid.

    ``values`` has shape ``(n_points, len(X))``; joint two-variable families
    (``two_mode``, ``multipartite_quadric``) carry a second grid ``X2`` and
    values of shape ``(n_points, len(X), len(X2))``. A non-``None`` window
    marks a thick tomogram.
    """

    family: str
    X: np.ndarray
    params: np.ndarray
    values: np.ndarray
    param_names: tuple
    window: object = None
    X2: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown tomogram family {self.family!r}")
        self.X = np.asarray(self.X, dtype=float)
        check_uniform(self.X, "X grid")
        self.params = np.atleast_2d(np.asarray(self.params, dtype=float))
        if self.params.shape[1] != len(self.param_names):
            raise ValueError("params columns do not match param_names")
        self.values = np.asarray(self.values, dtype=float)
        shape = (len(self.params), self.X.size)
        if self.X2 is not None:
            self.X2 = np.asarray(self.X2, dtype=float)
            check_uniform(self.X2, "X2 grid")
            shape = shape + (self.X2.size,)
        if self.values.shape != shape:
            raise ValueError(f"values shape {self.values.shape} != expected {shape}")

    @property
    def dx(self):
        return float((self.X[-1] - self.X[0]) / (self.X.size - 1))

    @property
    def is_thick(self):
        return self.window is not None and getattr(self.window, "kind", "delta") != "delta"

    @property
    def binned(self):
        """True when values are histogram bin averages (set by the binning routes)."""
        return bool(self.meta.get("binned", False))

    @property
    def is_joint(self):
        return self.X2 is not None

    def normalization(self):
        """Per-point integral over X (and X2)."""
        total = self.values.sum(axis=tuple(range(1, self.values.ndim))) * self.dx
        if self.is_joint:
            total = total * float((self.X2[-1] - self.X2[0]) / (self.X2.size - 1))
        return total

    def index_of(self, point, atol=1e-12):
        point = np.asarray(point, dtype=float)
        hit = np.nonzero(np.all(np.abs(self.params - point) <= atol, axis=1))[0]
        if hit.size == 0:
            raise MissingParameterPoint(f"parameter point {tuple(point)} not sampled")
        return int(hit[0])

    def profile(self, point):
        return self.values[self.index_of(point)]

    def __add__(self, other):
        _check_compatible(self, other)
        return self._replace(self.values + other.values)

    def __mul__(self, scalar):
        return self._replace(self.values * scalar)

    __rmul__ = __mul__

    def _replace(self, values, **changes):
        kw = dict(family=self.family, X=self.X, params=self.params, values=values,
                  param_names=self.param_names, window=self.window, X2=self.X2,
                  meta=dict(self.meta))
        kw.update(changes)
        return Tomogram(**kw)


def _check_compatible(a, b):
    if (a.family != b.family or a.values.shape != b.values.shape
            or not np.array_equal(a.params, b.params) or not np.array_equal(a.X, b.X)):
        raise ValueError("tomograms are sampled differently")
