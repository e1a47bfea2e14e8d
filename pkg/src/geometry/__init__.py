from .incircle import (Incircle, ContactReport, BoundSummary, chebyshev_incircle, inradius_of_points,
                       contact_report, candidate_centers, bound_summary)
from .marking import MarkedSet, AlphaProfile, marked_set, alpha_profile, crossing_angles

__all__ = [
    "Incircle", "ContactReport", "BoundSummary", "chebyshev_incircle", "inradius_of_points", "contact_report",
    "candidate_centers", "bound_summary", "MarkedSet", "AlphaProfile", "marked_set", "alpha_profile",
    "crossing_angles",
]
