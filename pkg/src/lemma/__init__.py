from .engine import (ConstructionParams, choose_construction_params, circumradius, regular_polygon_config,
                     rotation_feasible_set, verify_noncover, verify_subset)
from .certificate import (CertificateBuilder, LemmaCertificate, NoncoverRecord, SubsetResult, SubsetStrategy,
                          VerificationReport, build_certificate, verify_certificate)

__all__ = [
    "ConstructionParams", "choose_construction_params", "circumradius", "regular_polygon_config",
    "rotation_feasible_set", "verify_noncover", "verify_subset", "CertificateBuilder", "LemmaCertificate",
    "NoncoverRecord", "SubsetResult", "SubsetStrategy", "VerificationReport", "build_certificate",
    "verify_certificate",
]
