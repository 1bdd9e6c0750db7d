"""Numerical lab for curvature-dependent spectra: closed plane curves, the
periodic operator -d^2/ds^2 + g kappa^2, annular Dirichlet Laplacians in
Fermi coordinates, the reduced convex-shell problem, and optimization over
curve space."""

__version__ = "0.1.0"

from .annulus import (
    AnnularDomain,
    EffectivePotentialField,
    Orientation,
    Spectrum2D,
    corollary3_bound,
    effective_potential,
    ground_state_2d,
    growth_factor,
    level_curvature,
    perturbed_edge,
    potential_field,
    radial_annulus_oracle,
)
from .curves import (
    ClosureReport,
    CurvatureProfile,
    PlanarCurve,
    closure_project,
    closure_report,
    make_circle,
    make_fourier_profile,
    make_stadium,
    mollify,
    reconstruct,
    resample,
    rescale,
)
from .errors import (
    ConvergenceError,
    DegeneracyWarning,
    GeometryError,
    NumericalError,
    ParameterError,
)
from .functional import (
    DensityProfile,
    EulerData,
    Lemma5Report,
    MinimizationReport,
    euler_data,
    euler_residual,
    evaluate_E,
    explicit_solution,
    first_integral_residual,
    lemma5_check,
    minimize_E,
    random_density,
    recover_kappa,
)
from .operator1d import (
    OperatorSpec,
    SpectrumResult,
    ground_state,
    hf_gradient_g,
    hf_gradient_kappa,
    rayleigh_quotient,
)
from .optimizer import (
    OptimizationConfig,
    OptimizationTrace,
    ScanResult,
    critical_g_scan,
    minimize_lambda1,
)
from .shell import (
    ShellProfile,
    reduced_ground_state,
    sphere_profile,
    steiner_area,
    thickness_from_volume,
    variable_change,
)
