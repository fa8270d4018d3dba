"""CSV tables for tomograms, Wigner fields and density matrices.

Numbers are written with 17 significant digits, so every float survives a
write/read cycle bit for bit. Tomogram rows are sorted by parameter tuple,
then X, whatever order they were computed in.

Tomogram header: ``family,<param names>,window,sampling,X[,X2],value``.
``window`` is ``delta``, ``gaussian:<sigma>`` or ``rect:<width>``;
``sampling`` is ``bin`` for histogram bin averages and ``point`` otherwise.
"""

import csv
import io as _io
from collections import OrderedDict

import numpy as np

from .grids import Axis, PhaseSpaceGrid, WignerField
from .states import FockDensityMatrix
from .thick import WindowSpec
from .tomogram import FAMILIES, Tomogram


def fmt(value):
    """17-significant-digit text that parses back to the same double."""
    return format(float(value), ".17g")


def window_token(window):
    if window is None or window.kind == "delta":
        return "delta"
    if window.kind == "gaussian":
        return f"gaussian:{fmt(window.sigma)}"
    return f"rect:{fmt(window.width)}"


def parse_window_token(token):
    kind, _, arg = token.partition(":")
    if kind == "delta":
        return None
    if kind == "gaussian":
        return WindowSpec.gaussian(float(arg))
    if kind == "rect":
        return WindowSpec.rect(float(arg))
    raise ValueError(f"unknown window token {token!r}")


def _write_rows(header, rows):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def tomogram_to_csv(t):
    """CSV text for a tomogram in canonical order."""
    names = list(t.param_names)
    x_cols = ["X", "X2"] if t.is_joint else ["X"]
    header = ["family"] + names + ["window", "sampling"] + x_cols + ["value"]
    win = window_token(t.window)
    sampling = "bin" if t.binned else "point"
    order = np.lexsort(t.params.T[::-1])
    rows = []
    for i in order:
        lead = [t.family] + [fmt(v) for v in t.params[i]] + [win, sampling]
        if t.is_joint:
            for a, x in enumerate(t.X):
                for b, x2 in enumerate(t.X2):
                    rows.append(lead + [fmt(x), fmt(x2), fmt(t.values[i, a, b])])
        else:
            rows.extend(lead + [fmt(x), fmt(v)] for x, v in zip(t.X, t.values[i]))
    return _write_rows(header, rows)


def tomogram_from_csv(text):
    """Parse :func:`tomogram_to_csv` output back into a :class:`Tomogram`."""
    reader = csv.reader(_io.StringIO(text))
    header = next(reader, None)
    if not header or header[0] != "family" or header[-1] != "value":
        raise ValueError("tomogram CSV needs a header starting with 'family' and ending with 'value'")
    joint = header[-2] == "X2"
    n_x = 2 if joint else 1
    if header[-3 - n_x:-1 - n_x] != ["window", "sampling"]:
        raise ValueError("tomogram CSV lacks the window and sampling columns")
    names = tuple(header[1:-3 - n_x])
    groups = OrderedDict()
    family = window = sampling = None
    for line, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise ValueError(f"line {line}: expected {len(header)} fields, got {len(row)}")
        family = family or row[0]
        window = window or row[1 + len(names)]
        sampling = sampling or row[2 + len(names)]
        if (row[0], row[1 + len(names)], row[2 + len(names)]) != (family, window, sampling):
            raise ValueError(f"line {line}: mixed family, window or sampling in one file")
        key = tuple(float(v) for v in row[1:1 + len(names)])
        xs = tuple(float(v) for v in row[-1 - n_x:-1])
        groups.setdefault(key, {})[xs] = float(row[-1])
    if not groups:
        raise ValueError("tomogram CSV has no data rows")
    if family not in FAMILIES:
        raise ValueError(f"unknown tomogram family {family!r}")
    first = next(iter(groups.values()))
    X = np.array(sorted({k[0] for k in first}))
    X2 = np.array(sorted({k[1] for k in first})) if joint else None
    values = []
    for key, samples in groups.items():
        expected = {(a, b) for a in X for b in X2} if joint else {(a,) for a in X}
        if set(samples) != expected:
            raise ValueError(f"parameter point {key} is not sampled on the common X grid")
        if joint:
            v = np.array([[samples[(a, b)] for b in X2] for a in X])
        else:
            v = np.array([samples[(a,)] for a in X])
        values.append(v)
    return Tomogram(family, X, np.array(list(groups)), np.array(values), names,
                    window=parse_window_token(window), X2=X2,
                    meta={"binned": sampling == "bin"})


def wigner_to_csv(W):
    names = ["q", "p"] if W.grid.ndim == 2 else \
        [f"{c}{j + 1}" for j in range(W.grid.modes) for c in ("q", "p")]
    pts = W.grid.points()
    rows = [[fmt(v) for v in p] + [fmt(w)] for p, w in zip(pts, W.values.ravel())]
    return _write_rows(names + ["value"], rows)


def wigner_from_csv(text):
    reader = csv.reader(_io.StringIO(text))
    header = next(reader)
    data = np.array([[float(v) for v in row] for row in reader])
    ndim = len(header) - 1
    coords = [np.unique(data[:, d]) for d in range(ndim)]
    grid = PhaseSpaceGrid(tuple(Axis(c[0], c[-1], c.size) for c in coords))
    return WignerField(grid, data[:, -1].reshape(grid.shape))


def density_to_csv(rho):
    m = rho.entries if isinstance(rho, FockDensityMatrix) else np.asarray(rho)
    rows = [[str(i), str(j), fmt(m[i, j].real), fmt(m[i, j].imag)]
            for i in range(m.shape[0]) for j in range(m.shape[1])]
    return _write_rows(["m", "n", "re", "im"], rows)


def density_from_csv(text):
    reader = csv.reader(_io.StringIO(text))
    next(reader)
    rows = [(int(r[0]), int(r[1]), float(r[2]), float(r[3])) for r in reader]
    dim = max(max(r[0], r[1]) for r in rows) + 1
    m = np.zeros((dim, dim), complex)
    for i, j, re, im in rows:
        m[i, j] = re + 1j * im
    return m


def tomogram_to_gnuplot(t):
    """Two-column ``X value`` blocks, one per parameter point, separated by blank lines."""
    if t.is_joint:
        raise ValueError("gnuplot output covers single-X tomograms")
    lines = []
    for i in np.lexsort(t.params.T[::-1]):
        label = " ".join(f"{n}={fmt(v)}" for n, v in zip(t.param_names, t.params[i]))
        lines.append(f"# {t.family} {label}")
        lines.extend(f"{fmt(x)} {fmt(v)}" for x, v in zip(t.X, t.values[i]))
        lines.append("")
        lines.append("")
    return "\n".join(lines)
