//! The presheaf topos over a finite base category.

pub mod core;
pub mod enumerate;
pub mod exponential;
pub mod omega;
pub mod search;
pub mod universe;

pub use self::core::{
    coproduct, corestrict, epi_mono_factorize, equalizer, image, pairing, preimage, product, product_map, pullback,
    to_terminal, Elem, ImageFactorization, MapError, Presheaf, PresheafError, PresheafMap, Product, Pullback,
    Subpresheaf,
};
pub use enumerate::{canonical_form, enumerate_presheaves, subpresheaves};
pub use exponential::{curry, evaluation, exponential, precompose, Exponential};
pub use omega::{describe_sieve, Omega, Sieve};
pub use search::{find_iso, hom_set, HomSearch};
pub use universe::Universe;
