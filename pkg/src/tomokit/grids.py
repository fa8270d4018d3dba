"""Uniform phase-space grids and the field containers that live on them."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Axis:
    min: float
    max: float
    count: int

    def __post_init__(self):
        if not self.max > self.min:
            raise ValueError(f"axis max ({self.max}) must exceed min ({self.min})")
        if self.count < 8:
            raise ValueError(f"axis needs at least 8 points, got {self.count}")

    @property
    def step(self):
        return (self.max - self.min) / (self.count - 1)

    @property
    def points(self):
        return np.linspace(self.min, self.max, self.count)

    def trapezoid_weights(self):
        w = np.full(self.count, self.step)
        w[0] = w[-1] = 0.5 * self.step
        return w


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Tensor-product grid. Phase-space grids order the axes ``(q1, p1, q2, p2, ...)``."""

    axes: tuple

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(
            a if isinstance(a, Axis) else Axis(*a) for a in self.axes))

    @classmethod
    def square(cls, extent=8.0, count=256, modes=1):
        """``[-extent, extent]`` on every axis of an ``modes``-mode phase space."""
        return cls(tuple(Axis(-extent, extent, count) for _ in range(2 * modes)))

    @property
    def ndim(self):
        return len(self.axes)

    @property
    def modes(self):
        return self.ndim // 2

    @property
    def shape(self):
        return tuple(a.count for a in self.axes)

    @property
    def steps(self):
        return np.array([a.step for a in self.axes])

    @property
    def cell_volume(self):
        return float(np.prod(self.steps))

    def coords(self):
        return [a.points for a in self.axes]

    def mesh(self):
        return np.meshgrid(*self.coords(), indexing="ij")

    def points(self):
        """All grid points as an ``(n, ndim)`` array in C order."""
        return np.stack([m.ravel() for m in self.mesh()], axis=1)

    def trapezoid_weights(self):
        w = np.ones(())
        for a in self.axes:
            w = np.multiply.outer(w, a.trapezoid_weights())
        return w

    def integrate(self, values):
        return float(np.sum(np.asarray(values) * self.trapezoid_weights()).real)


@dataclass
class WignerField:
    """Wigner function sampled on a grid; normalized to ``(2*pi)**modes``."""

    grid: PhaseSpaceGrid
    values: np.ndarray
    residual: float = 0.0  # max |Im| / max |Re| left by an inverse transform

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(f"values shape {self.values.shape} != grid shape {self.grid.shape}")

    def integral(self):
        return self.grid.integrate(self.values)

    def __add__(self, other):
        return WignerField(self.grid, self.values + other.values)

    def __mul__(self, scalar):
        return WignerField(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass
class ClassicalField:
    """Real function on an m-dimensional grid (no normalization convention)."""

    grid: PhaseSpaceGrid
    values: np.ndarray
    mask: np.ndarray = field(default=None)
    residual: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(f"values shape {self.values.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    def integral(self):
        return self.grid.integrate(self.values)


def check_support(values, what="field", tolerance=1e-8):
    """Raise GridTooSmall when ``values`` has not decayed at the grid boundary."""
    from .exceptions import GridTooSmall

    v = np.abs(np.asarray(values))
    peak = float(v.max()) if v.size else 0.0
    edge = 0.0
    for axis in range(v.ndim):
        edge = max(edge, float(np.take(v, [0, -1], axis=axis).max()))
    if peak > 0 and edge > tolerance * peak:
        raise GridTooSmall(f"{what} is {edge / peak:.3g} of its peak on the grid boundary")


def uniform_grid(start, stop, count):
    return np.linspace(start, stop, count)


def check_uniform(x, name="grid", rtol=1e-9):
    """Return ``(x0, step)`` for a uniform increasing 1-D grid or raise."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError(f"{name} must be a 1-D array with at least 2 points")
    d = np.diff(x)
    step = (x[-1] - x[0]) / (x.size - 1)
    if step <= 0 or np.max(np.abs(d - step)) > rtol * max(1.0, abs(step)) * 10:
        raise ValueError(f"{name} must be uniform and increasing")
    return float(x[0]), float(step)


def relative_l2(approx, exact, weights=None):
    approx = np.asarray(approx)
    exact = np.asarray(exact)
    if weights is None:
        weights = 1.0
    num = np.sum(weights * np.abs(approx - exact) ** 2)
    den = np.sum(weights * np.abs(exact) ** 2)
    return float(np.sqrt(num / den))
