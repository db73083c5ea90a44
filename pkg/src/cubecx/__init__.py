"""Finite CAT(0) cube complexes: hyperplanes, metrics, projections, separation,
contact graphs, Sageev duality and group actions, with law checks throughout."""

from .actions import (ActionSpec, Automorphism, Group, PartialAutomorphism, acyl_profile,
                      automorphism_group, coarse_stabilizer, displacement_check, displacement_scan,
                      essentiality_report, generate_group, hyperplane_stabilizer, pair_stabilizer,
                      ramsey_bound, ramsey_linkage, ramsey_number_bruteforce, skewer_detect,
                      wpd_certificate)
from .contact import (ContactGraph, DeltaChain, contact_graph, delta_chain, four_point_delta,
                      hagen_check, qi_check)
from .convexity import ConvexSet, as_convex, carrier, convex_hull, gate, halfspace, is_convex, project_set
from .dot import export_dot
from .duality import (Ultrafilter, Wallspace, dual_complex, irreducible_decompose, restriction_quotient,
                      round_trip_map, walls_of)
from .errors import (CapExceeded, CubeComplexError, LawViolation, NotAnAutomorphism, NotConvexError,
                     NotMedianError, StructuralError)
from .generators import generate
from .graph import (CubeGraph, Hyperplane, ValidationReport, dimension, dist_l1, dist_linf, hyperplanes,
                    interval, median, validate_median)
from .io import canonical_json
from .separation import (HyperplaneRelation, SeparationReport, facing_triple, hyperplane_layers, relation,
                         separates, thinness_constant, well_separation_degree)

__version__ = "0.1.0"
