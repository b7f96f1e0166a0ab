"""Differential geometry of Galilean 3-space at desk scale.

Curve and surface invariants in the affine model, constructors for the
five translation-surface types and their constant-curvature
representatives, grid-based verification, and a scene-driven CLI.
"""

from .errors import (
    DegenerateSurfaceError,
    ExprError,
    ExprEvalError,
    GeometryError,
    InadmissibleError,
    JetDomainError,
    NonUnitSpeedError,
    SceneError,
    ValidationError,
    VanishingCurvatureError,
)
from .expr import parse, to_source, eval_jet1, eval_jet2, eval_value
from .jets import Jet1, Jet2, fd_jet1, fd_jet2
from .motions import (
    GalileanMotion,
    Point3,
    Vector3,
    classify_vector,
    galilean_distance,
    is_isotropic,
)
from .curves import (
    Curve,
    check_isotropic_unit_speed,
    classify_planarity,
    curvature,
    is_admissible,
    is_planar,
    is_space_curve,
    shift_parameter,
    torsion,
    transform_curve,
)
from .surfaces import (
    FundamentalData,
    MeanCurvature,
    Surface,
    curvatures,
    curvatures_fd,
    fundamental,
    gaussian_curvature,
    is_admissible_surface,
    mean_curvature,
    transform_surface,
)
from .translation import (
    AffineMatrix,
    CubicHermite,
    SurfaceFamily,
    affine_translation_form,
    closed_form_H_affine,
    closed_form_H_type3,
    closed_form_H_type4,
    closed_form_K_affine,
    closed_form_K_type3,
    closed_form_K_type4,
    make_affine,
    make_cmc_cylinder,
    make_constant_K_type1,
    make_parabolic_ruled,
    make_ruled_type_C,
    make_standard,
    make_type3,
    make_type3_circle,
    make_type4,
    make_type4_cmc_ode,
    parabolic_ruled_as_type_c,
)
from .verify import (
    CurvatureReport,
    ProbeReport,
    TheoremCertificate,
    certify_theorem,
    probe_nonexistence,
    sample,
)

__version__ = "0.1.0"
