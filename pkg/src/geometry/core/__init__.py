from .errors import (
    InvalidBodyError,
    NotInteriorError,
    DegenerateHullError,
    InvalidParameterError,
    CenterNotAdmissibleError,
    CertificateFormatError,
    BudgetExhausted,
    VerificationError,
)
from .primitives import (
    TWO_PI,
    DEFAULT_TOL,
    Point2,
    Configuration,
    RigidMotion,
    apply,
    convex_hull,
    normalize_angle,
    points_to_array,
    array_to_points,
    rotation_matrix,
)
from .angular import AngularInterval, AngularSet, angular_union, angular_complement
from .body import Body, ArcPiece, SegmentPiece, contains, contains_all, is_interior, radial_distance, reflect, signed_excess

__all__ = [
    "InvalidBodyError", "NotInteriorError", "DegenerateHullError", "InvalidParameterError",
    "CenterNotAdmissibleError", "CertificateFormatError", "BudgetExhausted", "VerificationError",
    "TWO_PI", "DEFAULT_TOL", "Point2", "Configuration", "RigidMotion", "apply", "convex_hull",
    "normalize_angle", "points_to_array", "array_to_points", "rotation_matrix",
    "AngularInterval", "AngularSet", "angular_union", "angular_complement",
    "Body", "ArcPiece", "SegmentPiece", "contains", "contains_all", "is_interior",
    "radial_distance", "reflect", "signed_excess",
]
