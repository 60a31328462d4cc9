"""Exact canonical bases and PBW transition coefficients for U_q(n^-) of finite type."""
from .errors import CapacityError, DomainError, IntegrityError, QCanonError
from .qfield import LaurentPoly, Scalar, bar, is_laurent, is_positive, quantum_binom, quantum_int, truncate_below
from .rootdata import RootDatum, cartan_type, longest_element_words, positive_roots_of, simple_reflection
from .mixedalg import MixedElement, braid, multiply, project_to_neg
from .uqn import NegElement, bilinear_form, derivation, i_string_decompose, kashiwara_op, star, bar_elem
from .pbw import PbwBasis, build_basis, dual_pbw_monomial, expand, pbw_monomial
from .canon import (
    CanonicalBasis,
    CanonicalBasisSlice,
    CrystalLabel,
    canonical_basis,
    canonical_slice,
    crystal_step,
    kashiwara_embed,
    saito_reflect,
)
from .transition import (
    StructureConstants,
    TransitionTable,
    structure_constants,
    transition_table,
    verify_dhat_bar_relation,
    verify_similarity,
    zeta_direct,
    zeta_formula,
)
from .verify import run_suite

__version__ = "0.1.0"
