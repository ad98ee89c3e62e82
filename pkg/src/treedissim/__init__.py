"""Exact arithmetic for subset dissimilarity maps of weighted trees.

The package computes, for an edge-weighted tree on leaves 1..n, the
tensor assigning to each m-subset the weight of the minimal spanning
subtree, via the half-minimum-tour formula over cyclic orders.  Around
that sit membership predicates (four-point, ultrametric, three-term
relations, the m=4 pairing characterization), an exact inversion and
membership decision for m=3, constructions (random trees, topology
enumeration, equidistant realizations, reconstruction from a metric),
and Puiseux-series valuation certificates.  All arithmetic is rational
and exact; there is no floating-point mode.
"""

from .rationals import format_rational, parse_rational
from .tropical import (
    TropTerm,
    Verdict,
    eval_trop_poly,
    four_point_check,
    in_Tmn,
    is_ultrametric,
    max_twice,
    three_term_plucker_check,
)
from .trees import (
    AlphaLabel,
    Contraction,
    DistanceMatrix,
    FourPointViolation,
    NewickError,
    TopologyIterator,
    TreeError,
    UltrametricViolation,
    WeightedTree,
    WellNumbering,
    build_equidistant,
    contract_subtree,
    distance_matrix,
    enumerate_topologies,
    parse_newick,
    random_tree,
    reconstruct_tree,
    same_tree,
    serialize_newick,
    steiner_weight,
    well_number,
)
from .dissim import (
    CycleSum,
    DissimTensor,
    InversionError,
    M4Report,
    Membership3Result,
    PairingPoint,
    PiPoint,
    QuadrupleReport,
    cycle_sum,
    dissimilarity_map,
    in_L,
    invert3,
    invert_triple_dissimilarity,
    membership3,
    p_project,
    pairing_agreement,
    pairing_map,
    phi_3,
    phi_m,
    phi_m_with_argmin,
    pi4,
    project_pairings,
    reroot_ultrametric,
    subset_cherries,
    subset_dissimilarity,
    tour_minimizers,
    triple_dissimilarity,
    triple_membership,
    verify_m4_characterization,
)
from .puiseux import (
    Certificate3,
    CertificateError,
    PuiseuxPoly,
    ValuationCertificate,
    build_certificate,
    det3,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaLabel",
    "Certificate3",
    "CertificateError",
    "Contraction",
    "CycleSum",
    "DissimTensor",
    "DistanceMatrix",
    "FourPointViolation",
    "InversionError",
    "M4Report",
    "Membership3Result",
    "NewickError",
    "PairingPoint",
    "PiPoint",
    "PuiseuxPoly",
    "QuadrupleReport",
    "TopologyIterator",
    "TreeError",
    "TropTerm",
    "UltrametricViolation",
    "ValuationCertificate",
    "Verdict",
    "WeightedTree",
    "WellNumbering",
    "build_certificate",
    "build_equidistant",
    "contract_subtree",
    "cycle_sum",
    "det3",
    "dissimilarity_map",
    "distance_matrix",
    "enumerate_topologies",
    "eval_trop_poly",
    "format_rational",
    "four_point_check",
    "in_L",
    "in_Tmn",
    "invert3",
    "invert_triple_dissimilarity",
    "is_ultrametric",
    "max_twice",
    "membership3",
    "p_project",
    "pairing_agreement",
    "pairing_map",
    "parse_newick",
    "parse_rational",
    "phi_3",
    "phi_m",
    "phi_m_with_argmin",
    "pi4",
    "project_pairings",
    "random_tree",
    "reconstruct_tree",
    "reroot_ultrametric",
    "same_tree",
    "serialize_newick",
    "steiner_weight",
    "subset_cherries",
    "subset_dissimilarity",
    "three_term_plucker_check",
    "tour_minimizers",
    "triple_dissimilarity",
    "triple_membership",
    "verify_certificate",
    "verify_m4_characterization",
    "well_number",
]
