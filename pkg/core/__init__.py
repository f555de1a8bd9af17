"""核心模块：有限代数、同余、自由代数与各类判定"""
from core.algebra import (
    FiniteAlgebra,
    Homomorphism,
    PullbackAlgebra,
    Signature,
    compose,
    enumerate_homs,
    find_isomorphism,
    generated_subalgebra,
    hom_check,
    identity_hom,
    image_factorization,
    kernel_subalgebra,
    make_hom,
    product,
    pullback,
    quotient,
    validate_algebra,
)
from core.commutation import (
    AnticommutativityVerdict,
    Cooperator,
    are_disjoint,
    check_product_coequalizer,
    decide_anticommutative,
    disjoint_via_images,
    disjoint_via_kernels,
    find_cooperator,
    is_central,
    is_commutative_object,
    verify_anticommutativity_witness,
)
from core.congruences import (
    Chain,
    Congruence,
    all_congruences,
    chain_between,
    eq_kernel,
    generated_congruence,
    join,
    leq,
    meet,
    principal,
)
from core.free_algebras import (
    FreeAlgebra,
    free_algebra,
    free_extension,
    has_absorbing_idempotent_term,
    has_jonsson_tarski_term,
    has_majority_term,
)
from core.lemmas import (
    LemmaVerdict,
    LocalVerdict,
    ddcc_on_product,
    decide_locally_anticommutative,
    is_idempotent,
    shifting_lemma_holds,
    shifting_on_pullback,
    triangular_lemma_holds,
    triangular_on_pullback,
    verify_local_witness,
)
from core.points import (
    GroupoidData,
    GroupoidVerdict,
    SplitPoint,
    check_commuting_implies_diagonal,
    check_point_anticommutativity,
    equivalence_relation_groupoid,
    fibre_product,
    find_partial_maltsev,
    validate_point,
    verify_internal_groupoid,
)
from core.sampling import sample_variety_members, scan_pullback_lemma
from core.terms import Op, Term, Var, evaluate_term, format_term, parse_term
from core.verdicts import Verdict
from core.witnesses import LocalWitness, MaltsevWitness

__all__ = [
    "FiniteAlgebra",
    "Homomorphism",
    "PullbackAlgebra",
    "Signature",
    "compose",
    "enumerate_homs",
    "find_isomorphism",
    "generated_subalgebra",
    "hom_check",
    "identity_hom",
    "image_factorization",
    "kernel_subalgebra",
    "make_hom",
    "product",
    "pullback",
    "quotient",
    "validate_algebra",
    "AnticommutativityVerdict",
    "Cooperator",
    "are_disjoint",
    "check_product_coequalizer",
    "decide_anticommutative",
    "disjoint_via_images",
    "disjoint_via_kernels",
    "find_cooperator",
    "is_central",
    "is_commutative_object",
    "verify_anticommutativity_witness",
    "Chain",
    "Congruence",
    "all_congruences",
    "chain_between",
    "eq_kernel",
    "generated_congruence",
    "join",
    "leq",
    "meet",
    "principal",
    "FreeAlgebra",
    "free_algebra",
    "free_extension",
    "has_absorbing_idempotent_term",
    "has_jonsson_tarski_term",
    "has_majority_term",
    "LemmaVerdict",
    "LocalVerdict",
    "ddcc_on_product",
    "decide_locally_anticommutative",
    "is_idempotent",
    "shifting_lemma_holds",
    "shifting_on_pullback",
    "triangular_lemma_holds",
    "triangular_on_pullback",
    "verify_local_witness",
    "GroupoidData",
    "GroupoidVerdict",
    "SplitPoint",
    "check_commuting_implies_diagonal",
    "check_point_anticommutativity",
    "equivalence_relation_groupoid",
    "fibre_product",
    "find_partial_maltsev",
    "validate_point",
    "verify_internal_groupoid",
    "sample_variety_members",
    "scan_pullback_lemma",
    "Op",
    "Term",
    "Var",
    "evaluate_term",
    "format_term",
    "parse_term",
    "Verdict",
    "LocalWitness",
    "MaltsevWitness",
]
