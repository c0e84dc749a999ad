"""Exact branching for simple and affine Lie algebra modules via splints."""

from .rootsystem import RootSystem, build_root_system
from .characters import (FormalCharacter, character_via_weyl,
                         freudenthal_character, singular_element,
                         weyl_denominator, weyl_dimension)
from .splints import (Embedding, Fan, Splint, branch_direct, branch_via_splint,
                      check_embedding, check_splint, fan_coefficients,
                      find_splint, splint_catalog, tilde_weight)
from .affine import (AffineWeight, BranchingSeries, GradedCharacter,
                     MultiplicityMatrix, affine_character, affine_freudenthal,
                     branch_affine_direct, branch_affine_to_subalgebra,
                     graded_branch_to_g, invert_multiplicity_matrix,
                     multiplicity_matrix, q_dimension, string_function)
from .qseries import (QSeries, denominator_product, eta, euler_product, theta,
                      verify_denominator_splint, verify_theta_products,
                      verify_theta_sums)

__version__ = "0.1.0"
