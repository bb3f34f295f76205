"""quasivar: a workbench for finite universal algebra.

Decision procedures for finitely generated quasivarieties (joint
embedding, passive/plain structural completeness, unifiability,
minimality, membership), with built-in support for De Morgan and Dunn
monoids, Brouwerian algebras, and the finite poset duality.
"""

__version__ = "0.1.0"

from ._kernels import NUMBA_ENABLED
from .config import DEFAULT_GUARDS, Guards
from .errors import GuardExceeded, ParseError, QuasivarError, SignatureMismatch
from .kernel import (FiniteAlgebra, Signature, Term, are_isomorphic,
                     canonical_key, dedupe_up_to_iso, direct_product,
                     enumerate_subalgebras, eval_term, quotient,
                     subalgebra_generated, trivial_algebra)
from .congruence import (Congruence, CongruenceLattice, SiStatus,
                         all_congruences, principal_congruence,
                         relative_congruences, relatively_simple_image,
                         si_status)
from .morphisms import (Homomorphism, embedding_exists, enumerate_homs,
                        hom_exists, is_retract, separates,
                        trivial_subalgebra_points, zero_generated_subalgebra)
from .deciders import (Answer, FreeAlgebra, QuasiEquation, Verdict,
                       admissible_upto, excludes, free_algebra, jep_check,
                       kollar_check, minimal_quasivariety_check, passive,
                       psc_check, q_membership, ret_membership, sc_check,
                       unifiable, v_membership, valid)
from .demorgan import (BROUWER_SIG, DMM_SIG, DUNN_SIG, HEYTING_SIG, PscClass,
                       amendment, catalog, classify_psc_variety, dmm_facts_suite,
                       dunn_reduct, in_m, in_n, is_brouwerian,
                       is_demorgan_monoid, is_dunn_monoid,
                       jep_classification_conditions, reflect,
                       reflect_congruence, x_construction)
from .brouwer import (PMorphism, Poset, UpSetAlgebra, dual_of_hom,
                      dual_of_pmorphism, five_element_si_heyting_algebras,
                      hat, k_poset, p6, prime_filter_poset,
                      sh_membership_dual, surjective_pmorphism_exists,
                      up_algebra, up_sets)
