"""Galilei group ray representations: exact construction and verification.

The package builds the (1+1)/(2+1)/(3+1)-dimensional Galilei group, its Lie
algebra, the known projective phase exponents, and the explicit ray
representations on polynomial-Gaussian momentum states, then checks every
algebraic identity they are supposed to satisfy.
"""
from .group import (GalileiElement, act_on_momentum, element_from_dict,
                    element_to_dict, embed_matrix, identity, inverse,
                    multiply, random_element, rotation_2d, rotation_angle)
from .algebra import (AlgebraElement, algebra_from_dict, algebra_to_dict,
                      basis_element, basis_names, commutator, embed_algebra,
                      exponential, jacobi_residual, random_algebra_element,
                      zero)
from .cocycles import (DEFAULT_TAU_SEQUENCE, InfinitesimalExponentValue,
                       PhaseExponent, action_contribution, cocycle_residual,
                       equivalence_transform, evaluate, infinitesimal_exponent)
from .states import (DegreeOverflowError, PolyDiffOperator, PolyGaussianState,
                     PolyGaussianTerm, Polynomial, inner_product, normalized,
                     random_state, state_from_dict, state_norm, state_to_dict)
from .representations import (KIND_DIMS, MOMENTUM_KINDS, RepDescriptor, apply,
                              apply_time, basis_generator_pairing, generator,
                              generator_names, one_parameter_derivative,
                              rep_from_dict, rep_to_dict, static_generator)
from .verify import (HeisenbergFitResult, MultiplierReport,
                     check_initial_condition, check_time_multiplier,
                     default_sample_points, expected_multiplier_exponent,
                     exponent_cocycle_residual, extract_multiplier,
                     heisenberg_fit, match_exponent)
from .harness import (SuiteConfig, config_from_dict, config_to_dict,
                      default_config, load_config, report_json, run_suite)

__version__ = "0.1.0"
