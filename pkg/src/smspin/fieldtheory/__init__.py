"""Polynomial field theory: forms, covariant operators, interactions, field equations and gauge actions."""
from .forms import (Form, antisymmetrize, codifferential, codifferential_via_star, component, contract,
                    covariant_codiff, covariant_d, exterior_d, hodge_star, interior, levi_civita, one_form,
                    tensor, wedge)
from .model import (FieldTriple, GaugeModel, SourceTuple, YukawaForm, abelian_model, complexify,
                    invariant_yukawa_basis, realify, toy_electroweak_model)
from .interactions import KINDS, Interactions, SingularGramError, interaction_form, interactions, yukawa_coupling
from .operators import (apply_rep_form, bullet_form, clifford_contract, cov_codiff, cov_d, covariant_box,
                        curvature, dirac_current, dirac_operator, divergence, lichnerowicz_residual)
from .equations import (compatibility_residual, dirac_pairing, el_residual, lagrangian_density, potential,
                        potential_prime, relative_residual, source_scale, total_lagrangian)
from .action import ActionOracle, Sampled, bump
from .perturbation import (CHANNELS, TAGS, LinearizedFields, MissingFieldError, epsilon_extraction,
                           linearized_sources, nonlinear_terms, one_fold_coupling, perturbation_operator,
                           potential_terms, random_linearized_fields)
from .gauge import (BASE_POINT, GaugeTransformField, NotGroupValuedError, check_group_valued, entry_time,
                    exp_jet, expm_skew, gauge_apply, gauge_apply_at, temporal_component, temporal_gauge)
