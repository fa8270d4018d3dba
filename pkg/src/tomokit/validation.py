"""Input checks shared by the estimators, in the spirit of ``sklearn.utils.validation``."""

import numpy as np

from .exceptions import DimensionMismatch
from .grids import PhaseSpaceGrid, WignerField, check_uniform
from .thick import WindowSpec
from .tomogram import Tomogram


def check_fields(fields, modes=1):
    """Return a list of Wigner fields sharing one grid with ``modes`` modes."""
    if isinstance(fields, WignerField):
        fields = [fields]
    fields = list(fields)
    if not fields:
        raise ValueError("at least one Wigner field is required")
    for f in fields:
        if not isinstance(f, WignerField):
            raise TypeError(f"expected WignerField, got {type(f).__name__}")
        if f.grid != fields[0].grid:
            raise DimensionMismatch("all fields must share one grid")
    if fields[0].grid.modes != modes:
        raise DimensionMismatch(f"expected {modes}-mode fields, got {fields[0].grid.modes}")
    return fields


def check_points(points, width):
    """2-D float array of parameter points with ``width`` columns."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.ndim != 2 or points.shape[1] != width or len(points) == 0:
        raise ValueError(f"parameter points must have shape (n, {width}) with n >= 1")
    if not np.all(np.isfinite(points)):
        raise ValueError("parameter points must be finite")
    return points


def check_x_grid(X):
    X = np.asarray(X, dtype=float)
    check_uniform(X, "X grid")
    return X


def check_window(window):
    if window is None or isinstance(window, WindowSpec):
        return window
    if isinstance(window, dict):
        return WindowSpec.from_dict(window)
    raise TypeError("window must be a WindowSpec, a dict or None")


def check_grid(grid):
    if not isinstance(grid, PhaseSpaceGrid):
        raise TypeError(f"expected PhaseSpaceGrid, got {type(grid).__name__}")
    return grid


def probability_defects(t):
    """``(most negative value, largest |1 - integral|)`` of a single-X tomogram."""
    if not isinstance(t, Tomogram):
        raise TypeError("expected a Tomogram")
    return float(t.values.min()), float(np.max(np.abs(t.normalization() - 1.0)))


def is_probability_family(t, negativity=1e-9, normalization=1e-3):
    low, norm = probability_defects(t)
    return low >= -negativity and norm <= normalization
