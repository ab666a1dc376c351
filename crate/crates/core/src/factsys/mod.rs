//! Orthogonality, (pre)factorization systems and closure operators.

pub mod class;
pub mod closure;
pub mod enriched;
pub mod system;

pub use class::{
    object_orthogonal, objects_top, ordinary_orthogonal, orth_left, orth_right, orthogonality_witness,
    sigma_perp_objects, MorphismClass,
};
pub use closure::{
    check_closure_axioms, check_weakly_hereditary, clemb_densemb_identity, finite_closure_suite,
    presheaf_closure_suite, FiniteClosure,
};
pub use enriched::{
    enriched_object_orthogonal, enriched_orthogonal, presheaf_object_orthogonal, presheaf_orthogonal, Arrow,
};
pub use system::{
    check_factorization_system, check_prefactorization, check_proper, least_factorization, pullback, stability_report,
    FactorizationSystem, Violation,
};
