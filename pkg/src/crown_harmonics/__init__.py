"""Kernel Fourier analysis on the sphere with holomorphic extension.

The library computes coefficient transforms against complex powers of
the boundary pairing, extends them holomorphically in the degree,
certifies cap support from spectral decay and reflection symmetry, and
realizes the boundary models of the rotation generators. See README.md
for the mathematical conventions and the JSON interchange schemas.
"""

from .errors import (
    CrownDomainError,
    CrownHarmonicsError,
    GridResolutionError,
    NumericalError,
    PoleError,
    ProviderError,
    SchemaError,
    SingularParameterError,
)
from .numerics import (
    QuadratureRule1D,
    assoc_legendre,
    complex_gamma,
    gauss_legendre,
    legendre_p,
    legendre_p_table,
    principal_pow,
)
from .sphere import (
    DEFAULT_BOUNDARY_SAMPLES,
    ROOT_DATUM,
    BoundaryPoint,
    GridFunction,
    RootDatum,
    SpectralParam,
    SphereGrid,
    SpherePoint,
    boundary_log_pairing,
    cap_quadrature,
    integrate,
    iwasawa_log,
    kernel_mode,
    kernel_mode_profiles,
    poisson_pairing,
    rotate,
    support_radius,
)
from .intertwining import (
    IntertwinerScalar,
    intertwiner_rational,
    intertwiner_scalar,
    probe_integral,
    sample_intertwiner,
    singular_distance,
    weyl_reflected,
)
from .transform import (
    CallableProvider,
    CoefficientProvider,
    CoefficientTable,
    ExtendProvider,
    TableProvider,
    analyze,
    extend,
    ktype_project,
    ladder_components,
    rotation_derivative,
    synthesize,
    zonal_transform,
)
from .paley_wiener import (
    Calibration,
    PWReport,
    RadiusVerdict,
    TypeEstimate,
    decay_constants,
    pw_report,
    sample_line,
    type_estimate,
    weyl_lattice,
    weyl_residual,
)
from .reduction import (
    LadderFunction,
    PrincipalSeriesFunction,
    SigmaTransformedProvider,
    intertwine_check,
    kostant_ratio,
    ladder_scalar,
    rational_fit,
    reduction_synthesize,
    sigma_action,
)
from .testbed import (
    Bump,
    BumpSpec,
    bridge_factor_candidate,
    bridge_factors,
    make_bump,
    oracle_sht,
    random_bandlimited,
    random_table,
    spherical_harmonic,
)
from .serialization import (
    dumps_grid_function,
    dumps_report,
    dumps_table,
    format_float,
    line_scan_csv,
    loads_grid_function,
    loads_table,
)
from .verify import ALL_CHECKS, CheckResult, run_acceptance

__version__ = "1.0.0"

__all__ = [
    "ALL_CHECKS",
    "BoundaryPoint",
    "Bump",
    "BumpSpec",
    "Calibration",
    "CallableProvider",
    "CheckResult",
    "CoefficientProvider",
    "CoefficientTable",
    "CrownDomainError",
    "CrownHarmonicsError",
    "DEFAULT_BOUNDARY_SAMPLES",
    "ExtendProvider",
    "GridFunction",
    "GridResolutionError",
    "IntertwinerScalar",
    "LadderFunction",
    "NumericalError",
    "PWReport",
    "PoleError",
    "PrincipalSeriesFunction",
    "ProviderError",
    "QuadratureRule1D",
    "ROOT_DATUM",
    "RadiusVerdict",
    "RootDatum",
    "SchemaError",
    "SigmaTransformedProvider",
    "SingularParameterError",
    "SpectralParam",
    "SphereGrid",
    "SpherePoint",
    "TableProvider",
    "TypeEstimate",
    "analyze",
    "assoc_legendre",
    "boundary_log_pairing",
    "bridge_factor_candidate",
    "bridge_factors",
    "cap_quadrature",
    "complex_gamma",
    "decay_constants",
    "dumps_grid_function",
    "dumps_report",
    "dumps_table",
    "extend",
    "format_float",
    "gauss_legendre",
    "integrate",
    "intertwine_check",
    "intertwiner_rational",
    "intertwiner_scalar",
    "iwasawa_log",
    "kernel_mode",
    "kernel_mode_profiles",
    "kostant_ratio",
    "ktype_project",
    "ladder_components",
    "ladder_scalar",
    "legendre_p",
    "legendre_p_table",
    "line_scan_csv",
    "loads_grid_function",
    "loads_table",
    "make_bump",
    "oracle_sht",
    "poisson_pairing",
    "principal_pow",
    "probe_integral",
    "pw_report",
    "random_bandlimited",
    "random_table",
    "rational_fit",
    "reduction_synthesize",
    "rotate",
    "rotation_derivative",
    "run_acceptance",
    "sample_intertwiner",
    "sample_line",
    "sigma_action",
    "singular_distance",
    "spherical_harmonic",
    "support_radius",
    "synthesize",
    "type_estimate",
    "weyl_lattice",
    "weyl_reflected",
    "weyl_residual",
    "zonal_transform",
]
