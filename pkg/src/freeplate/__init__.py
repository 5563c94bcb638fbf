"""Free plate under tension on d-dimensional balls: eigenvalues, modes,
and independent verification."""

from .bessel import (
    DEFAULT_POLICY,
    BesselOrder,
    DimensionContext,
    SeriesCoefficients,
    SeriesPolicy,
    p11,
    pl1_bracket,
    series_coeffs,
    ultra_i,
    ultra_i_deriv,
    ultra_i_scaled,
    ultra_j,
    ultra_j_deriv,
)
from .errors import (
    BracketError,
    DomainError,
    FreePlateError,
    InvariantViolationError,
    QuadratureConvergenceError,
    SeriesBudgetError,
    TensionMismatchError,
    UnsupportedRangeError,
)
from .modes import (
    AngularFactor,
    GridSpec,
    ModeGrid,
    RadialProfile,
    angular_eval,
    radial_profile,
    sample_constant_mode,
    sample_mode,
)
from .quadrature import DEFAULT_RULE, QuadratureRule
from .spectrum import (
    ModeParams,
    PlateProblem,
    RootScanConfig,
    SpectrumEntry,
    SpectrumTable,
    W,
    eigenvalues,
    fundamental,
    fundamental_report,
    gamma_of,
    gamma_scaled_of,
    multiplicity,
    omega_of,
    rescale,
    scan_roots,
    split_omega,
)
from .verify import (
    LemmaVerdict,
    ResidualReport,
    boundary_residuals,
    lemma_suite,
    numerator_monotonicity,
    pde_residual,
    rayleigh_denominator,
    rayleigh_numerator,
    rayleigh_quotient,
    residual_report,
)

__version__ = "0.1.0"
