from .translation import (CoverResult, HellyReport, ImpossibilityCertificate, helly_triple_property,
                          min_core_residual, translation_cover, translation_coverable)
from .rigid import HellyEstimate, empirical_helly_number, impossibility_certificate, rigid_cover

__all__ = [
    "CoverResult", "HellyReport", "ImpossibilityCertificate", "helly_triple_property", "min_core_residual",
    "translation_cover", "translation_coverable", "HellyEstimate", "empirical_helly_number",
    "impossibility_certificate", "rigid_cover",
]
