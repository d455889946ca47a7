"""Potential theory for the polyharmonic heat operator d/dt + (-Lap)^m.

Kernel evaluation, heat potentials on space-time cylinders, boundary jump
relations, and a residual-based solvability test for one-sided (lateral)
Cauchy data, with reconstruction of the interior state when the data are
consistent.
"""

from .cauchy import (
    CauchyData,
    FitConfig,
    IncompatibleDataError,
    ReconstructionResult,
    SolvabilityReport,
    benchmark_problem,
    reconstruct,
    solvability,
    synthesize_data,
    uniqueness_experiment,
)
from .geometry import (
    AnnularSector,
    CylinderSpec,
    Disk,
    Interval,
    Rectangle,
    build_cylinder,
)
from .kernel import (
    KernelParams,
    RadialProfile,
    SingularEvaluation,
    TranslateField,
    UnsupportedOrder,
    get_profile,
    heat_closed_form,
    normalization,
    phi,
    phi_derivative,
    phi_values,
)
from .potentials import (
    FieldSum,
    LayerPotential,
    PoissonPotential,
    VolumePotential,
    representation_terms,
    trace_callables,
    trace_jump,
)

__version__ = "0.1.0"

__all__ = [
    "AnnularSector",
    "CauchyData",
    "CylinderSpec",
    "Disk",
    "FieldSum",
    "FitConfig",
    "IncompatibleDataError",
    "Interval",
    "KernelParams",
    "LayerPotential",
    "PoissonPotential",
    "RadialProfile",
    "ReconstructionResult",
    "Rectangle",
    "SingularEvaluation",
    "SolvabilityReport",
    "TranslateField",
    "UnsupportedOrder",
    "VolumePotential",
    "benchmark_problem",
    "build_cylinder",
    "get_profile",
    "heat_closed_form",
    "normalization",
    "phi",
    "phi_derivative",
    "phi_values",
    "reconstruct",
    "representation_terms",
    "solvability",
    "synthesize_data",
    "trace_callables",
    "trace_jump",
    "uniqueness_experiment",
    "__version__",
]
