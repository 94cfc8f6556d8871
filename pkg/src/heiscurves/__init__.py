"""Left-invariant geometry of the Heisenberg group and its metric family:
tensor tables, Frenet data along unit-speed curves, bitension-field
verification and the explicit non-geodesic biharmonic helices."""

from .analysis import (
    BitensionReport,
    ClassificationResult,
    SystemCheck,
    SystemReport,
    bitension_report,
    check_helix_system,
    check_system_33,
    classify_curve,
    cone_membership,
    legendre_pairing,
    residuals_to_csv,
    tension1,
    tension2_direct,
    tension2_frame,
)
from .curves import (
    CurveSample,
    CurveSamples,
    CurveSpec,
    FrenetSeries,
    covariant_derivative_along,
    frame_cross,
    frenet_apparatus,
    frenet_to_json,
    left_translate_curve,
    left_translate_samples,
    make_sampled_spec,
    read_samples_csv,
    sample_curve,
    write_samples_csv,
)
from .errors import (
    BasePointMismatch,
    DegeneratePlane,
    DomainError,
    DomainExit,
    GeodesicFrameUndefined,
    HeiscurvesError,
    InadmissibleAlpha,
    IntegrationFailure,
    NonMonotone,
    NonMonotoneAlpha,
    NonUnitSpeed,
    NonUnitVector,
    TooFewSamples,
    UnsupportedManifold,
)
from .factory import (
    ADMISSIBLE_BOUNDARY,
    HelixParams,
    SurfacePatch,
    b3zero_curve,
    biharmonic_helix,
    cylinder_patch,
    dump_curve_params,
    geodesic_ivp,
    helicoid_patch,
    helix_family_curve,
    helix_invariants,
    load_curve_params,
    membership_residual,
    one_param_subgroup,
    solve_branch_A,
    surface_eval,
    tangent_driven_curve,
)
from .manifold import (
    HEISENBERG,
    FrameVector,
    ManifoldParams,
    TangentVector,
    connection_frame,
    coord_to_frame,
    curvature_op,
    frame_to_coord,
    frame_vectors_at,
    left_translate,
    left_translate_velocity,
    lie_bracket_frame,
    metric_at,
    ricci_component,
    riemann_component,
    sectional,
)
from .numerics import DEFAULT_CONFIG, NumericsConfig

__version__ = "0.1.0"
