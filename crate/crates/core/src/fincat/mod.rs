//! Finite categories, functors, natural transformations, monads and
//! adjunctions as validated tables.

pub mod category;
pub mod enumerate;
pub mod functor;
pub mod monad;
pub mod presets;
pub mod reflect;

pub use category::{CategoryError, FinCategory, MorId, ObjId, RawCategory};
pub use enumerate::for_each_choice;
pub use functor::{FinFunctor, FinNatTrans, FunctorError, NatTransError};
pub use monad::{
    build_kleisli, check_monad_morphism, monad_isomorphism, unique_morphism_from_idempotent, AdjunctionData,
    AdjunctionError, Kleisli, MonadData, MonadError, Side,
};
pub use reflect::{enumerate_reflective_subcategories, Reflection};
