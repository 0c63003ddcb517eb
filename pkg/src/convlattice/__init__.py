"""Exact-arithmetic lattices of convex polytopes, their canonical
homomorphisms, segment transversals and polyhedral conjugation."""

from .classifier import (ClassifiedForm, OracleSample, check_order_preservation, classify,
                         fit_affine_map)
from .convex_functions import (MaxAffineFunction, SandwichCert, TruncatedEpigraph,
                               canonical_anti_homomorphism, canonical_function_homomorphism,
                               fenchel, fenchel_inverse, indicator, join_minus, join_plus,
                               meet_minus, meet_plus, support_function)
from .errors import *  # noqa: F401,F403
from .geometry import (AffineSubspace, ConvexBody, RadonPartition, affine_hull, convex_hull, dim,
                       join, meet, radon_partition)
from .homomorphism import (AffineMap, Case, HomomorphismSpec, VerificationReport, apply_body,
                           apply_point, check_dimension_laws, verify_homomorphism)
from .transversal import (Hyperplane, HyperplaneCert, ParallelSegment, RaySegment,
                          affine_dependence_hyperplane, helly_check, hyperplane_from_pole, pole,
                          segment_constraint, transversal_parallel, transversal_rays)

__version__ = "0.1.0"
