//! Validated input data and the classes it determines.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use crate::factsys::{
    check_prefactorization, check_proper, object_orthogonal, orth_left, orth_right, MorphismClass, Violation,
};
use crate::fincat::{build_kleisli, FinCategory, MonadData, MorId, ObjId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreError {
    /// `(E, M)` is not a prefactorization system.
    NotPrefactorization(Violation),
    /// `(E, M)` is a prefactorization system but not proper.
    NotProper(Violation),
    /// `(E, M)` lacks a factorization where one is required.
    NotFactorizationSystem(Violation),
    /// A member of `Σ` not inverted by `T`.
    SigmaNotInverted(MorId),
    /// Class sizes do not match the category.
    ClassShape,
    /// The input only supports definitions; theorems need properness.
    DefinitionsOnly(Violation),
    /// The morphism has no dense-then-closed factorization.
    AssumptionUnavailable(MorId),
    /// The extension of `ρ` along a morphism is not unique.
    NonUniqueExtension { mor: MorId, count: usize },
    /// An assembled structure failed validation.
    Internal(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::NotPrefactorization(v) => write!(f, "not a prefactorization system: {v}"),
            CoreError::NotProper(v) => write!(f, "prefactorization system is not proper: {v}"),
            CoreError::NotFactorizationSystem(v) => write!(f, "not a factorization system: {v}"),
            CoreError::SigmaNotInverted(g) => write!(f, "morphism {g} of Sigma is not inverted by T"),
            CoreError::ClassShape => write!(f, "morphism class does not match the category"),
            CoreError::DefinitionsOnly(v) => write!(f, "input is not proper ({v}); only definitions are available"),
            CoreError::AssumptionUnavailable(g) => {
                write!(f, "morphism {g} has no dense then closed-embedding factorization")
            }
            CoreError::NonUniqueExtension { mor, count } => {
                write!(f, "extension along morphism {mor} has {count} candidates")
            }
            CoreError::Internal(s) => write!(f, "internal: {s}"),
        }
    }
}

impl core::error::Error for CoreError {}

/// A monad with a prefactorization system `(E, M)` and a class `Σ ⊆ Σ_T`.
#[derive(Debug, Clone)]
pub struct CoreInput {
    pub monad: MonadData,
    pub e_class: MorphismClass,
    pub m_class: MorphismClass,
    pub sigma: MorphismClass,
    /// `None` when `(E, M)` is proper; otherwise the first failure.
    pub improper: Option<Violation>,
}

impl CoreInput {
    /// Requires a proper prefactorization system and `Σ ⊆ Σ_T`.
    pub fn new(
        monad: MonadData,
        e_class: MorphismClass,
        m_class: MorphismClass,
        sigma: MorphismClass,
    ) -> Result<Self, CoreError> {
        let input = Self::definitions_only(monad, e_class, m_class, sigma)?;
        match input.improper.clone() {
            Some(v) => Err(CoreError::NotProper(v)),
            None => Ok(input),
        }
    }

    /// As [`CoreInput::new`] but accepts an improper system, for which only
    /// the definitions (classes and membership tests) are available.
    pub fn definitions_only(
        monad: MonadData,
        e_class: MorphismClass,
        m_class: MorphismClass,
        sigma: MorphismClass,
    ) -> Result<Self, CoreError> {
        let c = monad.category().clone();
        let all = MorphismClass::all(&c);
        if [&e_class, &m_class, &sigma].iter().any(|k| k.union(&all) != all) {
            return Err(CoreError::ClassShape);
        }
        check_prefactorization(&c, &e_class, &m_class).map_err(CoreError::NotPrefactorization)?;
        if let Some(f) = sigma.first_outside(&sigma_t(&monad)) {
            return Err(CoreError::SigmaNotInverted(f));
        }
        let improper = check_proper(&c, &e_class, &m_class).err();
        Ok(CoreInput { monad, e_class, m_class, sigma, improper })
    }

    /// Input with `Σ = Σ_T`.
    pub fn with_sigma_t(monad: MonadData, e_class: MorphismClass, m_class: MorphismClass) -> Result<Self, CoreError> {
        let sigma = sigma_t(&monad);
        Self::new(monad, e_class, m_class, sigma)
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        self.monad.category()
    }

    pub(crate) fn require_proper(&self) -> Result<(), CoreError> {
        match &self.improper {
            Some(v) => Err(CoreError::DefinitionsOnly(v.clone())),
            None => Ok(()),
        }
    }
}

/// `Σ_T = {f | Tf iso}`.
pub fn sigma_t(m: &MonadData) -> MorphismClass {
    MorphismClass::from_ids(m.category(), &m.inverted_morphisms())
}

/// Morphisms inverted by the Kleisli left adjoint `F_T`.
pub fn sigma_kleisli(m: &MonadData) -> MorphismClass {
    let kl = build_kleisli(m);
    let left = kl.adjunction.left();
    MorphismClass::from_fn(m.category(), |f| kl.category.is_iso(left.on_mor(f)))
}

/// First morphism where `Σ_T` and `Σ_{F_T}` differ.
pub fn sigma_kleisli_mismatch(m: &MonadData) -> Option<MorId> {
    sigma_t(m).first_difference(&sigma_kleisli(m))
}

/// `ClEmb_Σ = Σ^↓ ∩ M`.
pub fn closed_embeddings(input: &CoreInput) -> MorphismClass {
    orth_right(input.category(), &input.sigma).intersection(&input.m_class)
}

/// `Dense_Σ = ClEmb_Σ^↑`.
pub fn dense_morphisms(input: &CoreInput) -> MorphismClass {
    orth_left(input.category(), &closed_embeddings(input))
}

/// Checks `ClEmb_Σ = (Σ ∪ E)^↓`, which makes `(Dense_Σ, ClEmb_Σ)` a
/// prefactorization system, and then checks that directly.
pub fn dense_closed_prefactorization(input: &CoreInput) -> Option<String> {
    let c = input.category();
    let closed = closed_embeddings(input);
    let rhs = orth_right(c, &input.sigma.union(&input.e_class));
    if let Some(f) = closed.first_difference(&rhs) {
        return Some(format!("ClEmb and (Σ ∪ E)^↓ differ at morphism {f}"));
    }
    check_prefactorization(c, &dense_morphisms(input), &closed).err().map(|v| format!("{v}"))
}

/// `B ∈ Σ^⊥`.
pub fn is_sigma_complete(input: &CoreInput, b: ObjId) -> bool {
    let c = input.category();
    input.sigma.ids().into_iter().all(|f| object_orthogonal(c, f, b))
}

/// `η_B ∈ M`.
pub fn is_t_separated(input: &CoreInput, b: ObjId) -> bool {
    input.m_class.contains(input.monad.eta(b))
}

/// Objects of `B_(T,Σ)`, ascending.
pub fn complete_separated_objects(input: &CoreInput) -> alloc::vec::Vec<ObjId> {
    input.category().objects().filter(|&b| is_sigma_complete(input, b) && is_t_separated(input, b)).collect()
}
