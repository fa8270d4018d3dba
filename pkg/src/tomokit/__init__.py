"""tomokit: phase-space tomograms of quantum states, their inverses and star-product quantizers."""

from .classical import QuadricSpec, deformed_radon, deformed_radon_inverse, quadric_inverse, \
    quadric_tomogram
from .estimators import DensityReconstructor, TomogramTransformer
from .exceptions import (DegenerateQuadric, DimensionMismatch, GridTooSmall, ImagResidualTooLarge,
                         MissingParameterPoint, NonPhysicalResult, SingularRegionRequested,
                         TomographyError, TraceNotDecayed, TruncationTooSmall, UnsupportedState,
                         WindowNotInvertible, WindowNotInvertibleAtUnitFrequency)
from .grids import Axis, ClassicalField, PhaseSpaceGrid, WignerField, relative_l2
from .quadric import (QuadraticHamiltonianSymbol, deformed_quantum_tomogram,
                      estimate_inverse_constant, multipartite_quadric_inverse,
                      multipartite_quadric_tomogram, quantum_quadric_inverse,
                      quantum_quadric_tomogram)
from .starprod import (DeformedPair, QDPair, QuadricPair, Symbol, ThickSymplecticPair,
                       commutator_check, dequantize, group_orbit_tomogram, projection_defect,
                       quantize, star_product, weak_duality_error)
from .states import (FockDensityMatrix, StateSpec, build_state, quadrature_density, wigner,
                     wigner_analytic, wigner_from_density)
from .symplectic import (com_invert_to_wigner, com_tomogram, homodyne_from_symplectic,
                         homodyne_invert_to_density, homodyne_tomogram, invert_to_density,
                         invert_to_wigner, symplectic_tomogram, symplectic_tomogram_from_density,
                         two_mode_invert_to_wigner, two_mode_tomogram)
from .thick import (WindowSpec, gaussian_thick_tomogram, thick_invert_to_wigner,
                    thick_quadric_inverse, thick_quadric_tomogram, thick_radon_deconvolve_invert,
                    thick_radon_tomogram, thick_symplectic_tomogram, thicken)
from .tomogram import Tomogram

__version__ = "0.1.0"

__all__ = ["Axis", "ClassicalField", "DeformedPair", "DegenerateQuadric", "DensityReconstructor",
    "DimensionMismatch", "FockDensityMatrix", "GridTooSmall", "ImagResidualTooLarge",
    "MissingParameterPoint", "NonPhysicalResult", "PhaseSpaceGrid", "QDPair",
    "QuadraticHamiltonianSymbol", "QuadricPair", "QuadricSpec", "SingularRegionRequested",
    "StateSpec", "Symbol", "ThickSymplecticPair", "Tomogram", "TomogramTransformer",
    "TomographyError", "TraceNotDecayed", "TruncationTooSmall", "UnsupportedState", "WignerField",
    "WindowNotInvertible", "WindowNotInvertibleAtUnitFrequency", "WindowSpec", "build_state",
    "com_invert_to_wigner", "com_tomogram", "commutator_check", "deformed_quantum_tomogram",
    "deformed_radon", "deformed_radon_inverse", "dequantize", "estimate_inverse_constant",
    "gaussian_thick_tomogram", "group_orbit_tomogram", "homodyne_from_symplectic",
    "homodyne_invert_to_density", "homodyne_tomogram", "invert_to_density", "invert_to_wigner",
    "multipartite_quadric_inverse", "multipartite_quadric_tomogram", "projection_defect",
    "quadrature_density", "quadric_inverse", "quadric_tomogram", "quantize",
    "quantum_quadric_inverse", "quantum_quadric_tomogram", "relative_l2", "star_product",
    "symplectic_tomogram", "symplectic_tomogram_from_density", "thick_invert_to_wigner",
    "thick_quadric_inverse", "thick_quadric_tomogram", "thick_radon_deconvolve_invert",
    "thick_radon_tomogram", "thick_symplectic_tomogram", "thicken", "two_mode_invert_to_wigner",
    "two_mode_tomogram", "weak_duality_error", "wigner", "wigner_analytic", "wigner_from_density"]
