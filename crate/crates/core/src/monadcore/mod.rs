//! Completion, closure and density relative to a monad, and the idempotent
//! core of a monad on a finite category.

pub mod certify;
pub mod input;
pub mod reflection;

pub use certify::{
    closure_suite, core_propositions, full_report, idempotent_core, stability_suite, verify_core_characterizations,
};
pub use input::{
    closed_embeddings, complete_separated_objects, dense_closed_prefactorization, dense_morphisms, is_sigma_complete,
    is_t_separated, sigma_kleisli, sigma_kleisli_mismatch, sigma_t, CoreError, CoreInput,
};
pub use reflection::{
    build_reflection, check_factorization_assumption, completion_factorization, separated_reflection, Completion,
    CoreResult,
};
