"""Finite distributive p-algebras, their poset duals, and quasivariety
membership at desk scale."""

from .core import (
    AlgebraMap,
    EnumerationResult,
    FiniteAlgebra,
    InconsistentMethodsError,
    ResourceLimitError,
    StructureError,
    ValidationReport,
    Violation,
    enumerate_embeddings,
    enumerate_homomorphisms,
    generated_subalgebra,
    is_isomorphic,
    is_subdirectly_irreducible,
    make_bn,
    principal_congruence,
    product,
    trivial_algebra,
    validate_palgebra,
)
from .duality import (
    EMPTY_POSET,
    FinitePoset,
    MembershipResult,
    PPMap,
    PPSearchResult,
    all_posets,
    compose_ppmaps,
    delta,
    delta_map,
    disjoint_union,
    epsilon,
    epsilon_map,
    find_surjective_ppmorphism,
    finite_membership,
    max_up,
    posets_isomorphic,
    posets_up_to,
    upsets_of,
    validate_poset,
    validate_ppmap,
)
from .logic import (
    Const,
    Join,
    Meet,
    ParseError,
    Quasiequation,
    SatisfactionResult,
    Star,
    Term,
    UnboundVariableError,
    Var,
    eval_term,
    format_quasiequation,
    format_term,
    make_ib,
    make_positive_diagram,
    make_qb,
    make_splitting_quasieq,
    parse,
    satisfies,
    variety_satisfies,
)
from .steiner import (
    SteinerQuasigroup,
    SteinerSystem,
    collapse_pasting,
    construct_sts,
    enumerate_quasigroup_homs,
    fano_system,
    from_quasigroup,
    is_planar,
    make_p1,
    paste_w,
    poset_of,
    to_quasigroup,
    validate_quasigroup,
    validate_steiner,
)
from .free import (
    COVER_POSETS,
    FreeAlgebraResult,
    build_free,
    check_free_qb3,
    check_special_structural,
    check_under_each,
    cover_fixture_checks,
    random_special_quasiequation,
)

__version__ = "0.1.0"
