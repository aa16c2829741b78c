"""Exact mod-p filtered Frobenius modules over F_{p^f}[u]/u^{ep}.

Construction and validation of the objects, adapted bases, hom spaces,
kernels and cokernels, classification of the simple objects by digit
cycles, composition series, and the tame inertia characters with the
weight bound 0 <= m_i <= er.
"""

from ._accel import BACKEND
from .params import GlobalParams
from .gf import Field, FieldElem, get_field
from .aring import APoly, AMatrix, ARing, get_aring, smith_normal_form
from .core import (BreuilModule, FilPresentation, Morphism, validate,
                   validate_morphism, adapt, eval_phi, phi_tilde, hom,
                   kernel, cokernel, image, direct_sum, scalar_extend,
                   solve_monodromy, conjugate, random_module)
from .simples import (SimpleDescriptor, make_simple, enumerate_simples,
                      is_shift_equivalent, classifying_rational,
                      endomorphism_field_degree, lyndon_count)
from .decomp import (JHReport, jordan_holder, simple_subobject, socle,
                     is_semisimple, mf_membership, is_isomorphic)
from .tame import (TameCharacter, MonomialSolution, weight_vector,
                   tame_character, inertia_weights,
                   rational_character_identity, solve_system_S,
                   galois_orbit, a_ss_exponent_test)
from .cyclo import verify_t_congruence, verify_b_sum

__version__ = "0.1.0"
