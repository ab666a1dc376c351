//! Lawvere–Tierney topologies on presheaf toposes over finite bases.

pub mod closure;
pub mod dual;
pub mod grothendieck;
pub mod plus;
pub mod quasitopos;
pub mod sheaf;
pub mod sheafify;
pub mod sweep;
pub mod topology;

pub use closure::{is_j_closed, is_j_dense, is_j_dense_sub, j_closure, lt_closure_suite};
pub use dual::{
    dualize, eta_is_mono, eta_vector, inverted_by_dual, monad_law_report, multiplication, restrict_vector, t_map,
    DoubleDual,
};
pub use grothendieck::{
    check_grothendieck, covering_sieves, dense_topology, enumerate_grothendieck_topologies, topology_of,
    GrothendieckTopology,
};
pub use plus::{
    plus_construction, plus_map, separated_quotient, sheafify_oracle, Germ, PlusConstruction, Sheafification,
};
pub use quasitopos::{in_bisite_subcategory, quasitopos_check};
pub use sheaf::{family_of, is_separated, is_sheaf, matching_families, sheaf_failure, sieve_arrows};
pub use sheafify::{
    closure_in_double_dual, describe_mismatch, extend_along_unit, iso_under, plus_plus_map, sheafify_agreement,
    sheafify_both, sheafify_via_core, CoreSheafification, SheafifyComparison, SheafifyError,
};
pub use sweep::{dense_composition_report, sweep_counts, verify_lt_theorem, verify_with, SweepData};
pub use topology::{check_lt_axioms, enumerate_lt_topologies, rejected_endomorphisms, LtTopology, LtViolation, OmegaJ};
