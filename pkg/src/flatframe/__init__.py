"""Property E certification for symmetric spaces of noncompact type.

Restricted root data lives in :mod:`flatframe.catalog`, ``dim Q_v`` and the
frame reduction in :mod:`flatframe.singular`, incidence matrices in
:mod:`flatframe.incidence`, the staged matcher in :mod:`flatframe.matcher`
and exact feasibility in :mod:`flatframe.oracle`.
"""
from .catalog import SpaceDescriptor, lookup
from .incidence import IncidenceMatrix, incidence_matrix, row_vector
from .matcher import MatchResult, staged_greedy
from .oracle import InfeasibilityCertificate, certify_property_e, feasible_matching, verify_match
from .singular import maximally_singular_rays, q_dim, q_intersection_dim, t_invariant

__all__ = [
    "SpaceDescriptor", "lookup", "IncidenceMatrix", "incidence_matrix", "row_vector",
    "MatchResult", "staged_greedy", "InfeasibilityCertificate", "certify_property_e",
    "feasible_matching", "verify_match", "maximally_singular_rays", "q_dim",
    "q_intersection_dim", "t_invariant",
]

__version__ = "0.1.0"
