"""Casimir force on the plates of a piston of arbitrary cross section.

The force follows from the combined Dirichlet and Neumann spectrum of the
2D Laplacian on the cross section. Zero-temperature, classical and
finite-temperature sums, near/far-field asymptotics and a cutoff-kernel
regularization demonstration are provided.
"""
from ._backend import BACKEND, available_backends
from .asymptotics import (dos_oracle, far_force, near_classical, near_classical_printed,
                          near_finite_T, near_T0)
from .errors import (CasimirError, ConfigError, ConvergenceError, CutoffCoverageError,
                     DivergenceError, DomainError, InsufficientSpectrumError,
                     InvalidGeometryError, ResolutionError, TruncationError)
from .force import (ForceResult, KernelForce, KernelSpec, ThermalState, force_classical,
                    force_finite_T, force_T0, kernel_force, kernel_scan, matsubara_weight)
from .geometry import (Circle, EquilateralTriangle, GeometryInvariants, Polygon,
                       Rectangle, RegularPolygon, invariants, polygon_area_chi)
from .numerical import spectrum_numerical
from .spectrum import (BC, ModeSpectrum, spectrum_analytic, spectrum_circle,
                       spectrum_rectangle, spectrum_triangle, weyl_check)

__version__ = "0.1.0"
