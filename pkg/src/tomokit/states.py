"""Quantum states on a truncated Fock space and their Wigner functions.

Conventions: ``Q = (a + a^dag)/sqrt(2)``, ``P = (a - a^dag)/(i sqrt(2))`` so the
vacuum has ``<Q^2> = 1/2`` and ``W_vac(q, p) = 2 exp(-q^2 - p^2)``, i.e. the
Wigner function integrates to ``2*pi`` over the plane.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .exceptions import GridTooSmall, TruncationTooSmall, UnsupportedState
from .grids import PhaseSpaceGrid, WignerField

TAIL_TOLERANCE = 1e-8
BOUNDARY_TOLERANCE = 1e-10
OPERATOR_BUFFER = 4


@dataclass(frozen=True)
class StateSpec:
    """Recipe for a state: vacuum, coherent, fock, thermal or a mixture."""

    kind: str
    alpha: complex = 0.0
    n: int = 0
    nbar: float = 0.0
    components: tuple = field(default=())

    KINDS = ("vacuum", "coherent", "fock", "thermal", "mixture")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown state kind {self.kind!r}")
        if self.kind == "fock" and self.n < 0:
            raise ValueError("fock number must be nonnegative")
        if self.kind == "thermal" and self.nbar < 0:
            raise ValueError("thermal occupation must be nonnegative")
        if self.kind == "mixture":
            if not self.components:
                raise ValueError("mixture needs at least one component")
            w = np.array([c[0] for c in self.components], dtype=float)
            if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
                raise ValueError("mixture weights must be nonnegative and sum to 1")

    @classmethod
    def vacuum(cls):
        return cls("vacuum")

    @classmethod
    def coherent(cls, alpha):
        return cls("coherent", alpha=complex(alpha))

    @classmethod
    def fock(cls, n):
        return cls("fock", n=int(n))

    @classmethod
    def thermal(cls, nbar):
        return cls("thermal", nbar=float(nbar))

    @classmethod
    def mixture(cls, components):
        return cls("mixture", components=tuple((float(w), s) for w, s in components))

    @classmethod
    def from_dict(cls, d):
        """Parse ``{"kind": ..., ...}``; ``alpha`` may be a number or ``[re, im]``."""
        kind = d.get("kind")
        if kind == "vacuum":
            return cls.vacuum()
        if kind == "coherent":
            a = d.get("alpha", 0.0)
            if isinstance(a, (list, tuple)):
                a = complex(a[0], a[1])
            return cls.coherent(a)
        if kind == "fock":
            return cls.fock(d["n"])
        if kind == "thermal":
            return cls.thermal(d["nbar"])
        if kind == "mixture":
            return cls.mixture([(c["weight"], cls.from_dict(c["state"])) for c in d["components"]])
        raise ValueError(f"unknown state kind {kind!r}")

    def to_dict(self):
        if self.kind == "coherent":
            return {"kind": "coherent", "alpha": [self.alpha.real, self.alpha.imag]}
        if self.kind == "fock":
            return {"kind": "fock", "n": self.n}
        if self.kind == "thermal":
            return {"kind": "thermal", "nbar": self.nbar}
        if self.kind == "mixture":
            return {"kind": "mixture",
                    "components": [{"weight": w, "state": s.to_dict()} for w, s in self.components]}
        return {"kind": self.kind}


class FockDensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix on ``dim`` Fock states."""

    def __init__(self, entries, check=True, diagnostics=None):
        entries = np.array(entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("density matrix must be square")
        self.entries = entries
        self.diagnostics = dict(diagnostics or {})
        if check:
            self.validate()

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def n_max(self):
        return self.dim - 1

    def validate(self, tol=1e-12, psd_tol=1e-10):
        m = self.entries
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > tol:
            raise ValueError(f"density matrix trace {np.trace(m).real} != 1")
        if np.linalg.eigvalsh(m).min() < -psd_tol:
            raise ValueError("density matrix is not positive semidefinite")

    def fidelity(self, other):
        """Overlap ``Tr(rho sigma)``; equals Uhlmann fidelity when one state is pure."""
        other = other.entries if isinstance(other, FockDensityMatrix) else np.asarray(other)
        d = min(self.dim, other.shape[0])
        return float(np.trace(self.entries[:d, :d] @ other[:d, :d]).real)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self):
        return f"FockDensityMatrix(dim={self.dim})"


def _coherent_amplitudes(alpha, dim):
    n = np.arange(dim)
    logmag = -0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha) if alpha != 0 else 1.0) - 0.5 * gammaln(n + 1)
    amp = np.exp(logmag) * np.exp(1j * n * np.angle(alpha))
    if alpha == 0:
        amp = (n == 0).astype(complex)
    return amp


def _diagonal(spec, dim):
    """Untruncated populations for the diagonal families (vacuum, fock, thermal)."""
    n = np.arange(dim)
    if spec.kind == "vacuum":
        return (n == 0).astype(float)
    if spec.kind == "fock":
        return (n == spec.n).astype(float)
    nb = spec.nbar
    if nb == 0:
        return (n == 0).astype(float)
    return np.exp(n * np.log(nb / (nb + 1.0)) - np.log(nb + 1.0))


def _raw_matrix(spec, dim):
    if spec.kind == "mixture":
        return sum(w * _raw_matrix(s, dim) for w, s in spec.components)
    if spec.kind == "coherent":
        if abs(spec.alpha) ** 2 > (dim - 1) / 4.0:
            raise TruncationTooSmall(
                f"|alpha|^2={abs(spec.alpha) ** 2:.3g} exceeds n_max/4={(dim - 1) / 4:.3g}")
        amp = _coherent_amplitudes(spec.alpha, dim)
        return np.outer(amp, amp.conj())
    if spec.kind == "fock" and spec.n >= dim:
        raise TruncationTooSmall(f"fock({spec.n}) does not fit n_max={dim - 1}")
    return np.diag(_diagonal(spec, dim)).astype(complex)


def build_state(spec, n_max):
    """Density matrix of ``spec`` truncated to ``n_max + 1`` Fock states.

    Raises TruncationTooSmall when more than 1e-8 of the population falls
    outside the truncated basis; otherwise the state is renormalized.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    m = _raw_matrix(spec, n_max + 1)
    tail = 1.0 - np.trace(m).real
    if tail > TAIL_TOLERANCE:
        raise TruncationTooSmall(f"truncated population tail {tail:.3g} exceeds {TAIL_TOLERANCE}")
    m = m / np.trace(m).real
    m = 0.5 * (m + m.conj().T)
    return FockDensityMatrix(m)


def ladder(dim):
    """Annihilation operator on ``dim`` Fock states."""
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)


def quadrature_operators(n_max, buffer=OPERATOR_BUFFER):
    """``(Q, P)`` on ``n_max + 1`` Fock states.

    The operators are built on a basis enlarged by ``buffer`` states and then
    cropped; for Q and P alone this is exact, it matters for products formed
    before cropping (see :func:`quadrature_products`).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    dim = n_max + 1
    a = ladder(dim + buffer)
    q = (a + a.conj().T) / np.sqrt(2.0)
    p = (a - a.conj().T) / (1j * np.sqrt(2.0))
    return q[:dim, :dim], p[:dim, :dim]


def quadrature_products(n_max, buffer=OPERATOR_BUFFER):
    """``Q^2, P^2`` and ``(QP + PQ)/2`` formed on the buffered basis, then cropped."""
    dim = n_max + 1
    q, p = quadrature_operators(dim + buffer - 1, buffer=0)
    crop = (slice(0, dim), slice(0, dim))
    return (q @ q)[crop], (p @ p)[crop], (0.5 * (q @ p + p @ q))[crop]


def hermite_functions(x, n_max):
    """Harmonic-oscillator eigenfunctions ``psi_n(x)``, shape ``(n_max+1, len(x))``."""
    x = np.asarray(x, dtype=float)
    psi = np.empty((n_max + 1,) + x.shape)
    psi[0] = np.pi ** -0.25 * np.exp(-0.5 * x ** 2)
    if n_max >= 1:
        psi[1] = np.sqrt(2.0) * x * psi[0]
    for n in range(2, n_max + 1):
        psi[n] = np.sqrt(2.0 / n) * x * psi[n - 1] - np.sqrt((n - 1) / n) * psi[n - 2]
    return psi


def quadrature_density(rho, x, angle=0.0):
    """Marginal ``<x|rho|x>`` of the rotated quadrature ``Q cos(angle) + P sin(angle)``."""
    m = np.asarray(rho)
    n = np.arange(m.shape[0])
    psi = hermite_functions(x, m.shape[0] - 1) * np.exp(-1j * n * angle)[:, None]
    return np.einsum("mx,mn,nx->x", psi, m, psi.conj()).real


def _check_boundary(rho, grid):
    q_axis, p_axis = grid.axes
    ends_q = np.array([q_axis.min, q_axis.max])
    ends_p = np.array([p_axis.min, p_axis.max])
    mass = max(np.max(np.abs(quadrature_density(rho, ends_q, 0.0))),
               np.max(np.abs(quadrature_density(rho, ends_p, np.pi / 2))))
    if mass > BOUNDARY_TOLERANCE:
        raise GridTooSmall(f"quadrature density {mass:.3g} at the grid boundary exceeds "
                           f"{BOUNDARY_TOLERANCE}")


def wigner_from_density(rho, grid):
    """Wigner function of a single-mode density matrix on ``grid`` (axes q, p).

    Evaluated as the Fock-basis expansion of the Weyl transform
    ``W(p, q) = int <q - x/2|rho|q + x/2> exp(i p x) dx``, summed with the
    Laguerre recursion so no quadrature error enters.
    """
    if grid.ndim != 2:
        raise ValueError("wigner_from_density handles single-mode grids only")
    m = np.asarray(rho)
    _check_boundary(m, grid)
    q, p = grid.mesh()
    a2 = 2.0 * (q + 1j * p) / np.sqrt(2.0)  # 2*alpha
    dim = m.shape[0]
    wl = [np.exp(-0.5 * np.abs(a2) ** 2)]
    w = m[0, 0].real * wl[0]
    for n in range(1, dim):
        wl.append(a2 * wl[n - 1] / np.sqrt(n))
        w = w + 2.0 * np.real(m[0, n] * wl[n])
    for mm in range(1, dim):
        temp = wl[mm]
        wl[mm] = (np.conj(a2) * temp - np.sqrt(mm) * wl[mm - 1]) / np.sqrt(mm)
        w = w + np.real(m[mm, mm] * wl[mm])
        for n in range(mm + 1, dim):
            temp2 = (a2 * wl[n - 1] - np.sqrt(mm) * temp) / np.sqrt(n)
            temp = wl[n]
            wl[n] = temp2
            w = w + 2.0 * np.real(m[mm, n] * wl[n])
    return WignerField(grid, 2.0 * w)


def wigner_analytic(spec, grid):
    """Closed-form Gaussian Wigner function for vacuum and coherent states."""
    if spec.kind not in ("vacuum", "coherent"):
        raise UnsupportedState(f"no closed form for {spec.kind!r}")
    q, p = grid.mesh()
    alpha = complex(spec.alpha) if spec.kind == "coherent" else 0j
    q0, p0 = np.sqrt(2.0) * alpha.real, np.sqrt(2.0) * alpha.imag
    return WignerField(grid, 2.0 * np.exp(-(q - q0) ** 2 - (p - p0) ** 2))


def wigner(spec, grid, n_max=None):
    """Wigner field of ``spec``: closed form when available, Fock expansion otherwise.

    Two-mode grids accept a pair of specs and return the product state.
    """
    if grid.ndim == 4:
        s1, s2 = spec
        g1 = PhaseSpaceGrid(grid.axes[:2])
        g2 = PhaseSpaceGrid(grid.axes[2:])
        w1 = wigner(s1, g1, n_max).values
        w2 = wigner(s2, g2, n_max).values
        return WignerField(grid, np.multiply.outer(w1, w2))
    if spec.kind in ("vacuum", "coherent"):
        return wigner_analytic(spec, grid)
    return wigner_from_density(build_state(spec, n_max or default_n_max(spec)), grid)


def default_n_max(spec):
    if spec.kind == "fock":
        return spec.n + 8
    if spec.kind == "coherent":
        return max(12, int(np.ceil(4 * abs(spec.alpha) ** 2)) + 8)
    if spec.kind == "thermal":
        # geometric tail nbar/(nbar+1) ** (n+1) below 1e-10
        r = spec.nbar / (spec.nbar + 1.0) if spec.nbar else 0.0
        return 12 if r == 0 else max(12, int(np.ceil(np.log(1e-10) / np.log(r))))
    if spec.kind == "mixture":
        return max(default_n_max(s) for _, s in spec.components)
    return 12
