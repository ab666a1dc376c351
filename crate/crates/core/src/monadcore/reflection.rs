//! The completion factorization of the unit and the reflection onto the
//! `Σ`-complete `T`-separated objects.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::input::{
    closed_embeddings, complete_separated_objects, dense_morphisms, is_sigma_complete, is_t_separated, CoreError,
    CoreInput,
};
use crate::factsys::{least_factorization, FactorizationSystem, MorphismClass};
use crate::fincat::monad::monad_morphism_failure;
use crate::fincat::reflect::is_reflection_arrow;
use crate::fincat::{FinFunctor, FinNatTrans, MonadData, MorId, ObjId};
use crate::report::{Report, Scope};

/// Factorizes every morphism as a `Σ`-dense morphism followed by a
/// `Σ`-closed `M`-embedding, taking the least factorization of each.
pub fn check_factorization_assumption(input: &CoreInput) -> Result<FactorizationSystem, MorId> {
    let c = input.category();
    let dense = dense_morphisms(input);
    let closed = closed_embeddings(input);
    let factorizer =
        c.morphisms().map(|f| least_factorization(c, &dense, &closed, f).ok_or(f)).collect::<Result<Vec<_>, _>>()?;
    Ok(FactorizationSystem { left: dense, right: closed, factorizer })
}

/// `η_B = ι_B ∘ ρ_B` with `ρ_B` dense and `ι_B` a closed embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Completion {
    pub rho: MorId,
    pub completion: ObjId,
    pub iota: MorId,
}

pub fn completion_factorization(input: &CoreInput, fs: &FactorizationSystem, b: ObjId) -> Completion {
    let c = input.category();
    let (rho, iota) = fs.factor(input.monad.eta(b));
    Completion { rho, completion: c.dst(rho), iota }
}

/// The reflection onto `B_(T,Σ)` with the monad morphism into `T`.
#[derive(Debug, Clone)]
pub struct CoreResult {
    pub input: CoreInput,
    pub dense: MorphismClass,
    pub closed: MorphismClass,
    pub factorization: FactorizationSystem,
    pub completions: Vec<Completion>,
    /// The idempotent monad `T̃` with unit `ρ`.
    pub ttilde: MonadData,
    /// `ι: T̃ → T`.
    pub iota: FinNatTrans,
    /// Objects of `B_(T,Σ)`, ascending.
    pub subcategory: Vec<ObjId>,
    pub diagnostics: Report,
}

impl CoreResult {
    pub fn rho(&self, b: ObjId) -> MorId {
        self.completions[b].rho
    }

    pub fn completion(&self, b: ObjId) -> ObjId {
        self.completions[b].completion
    }
}

/// The unique `k: r → x` with `k∘rho = g`.
fn unique_extension(input: &CoreInput, rho: MorId, g: MorId, along: MorId) -> Result<MorId, CoreError> {
    let c = input.category();
    let ks: Vec<MorId> = c.hom(c.dst(rho), c.dst(g)).iter().copied().filter(|&k| c.comp(k, rho) == g).collect();
    match ks[..] {
        [k] => Ok(k),
        _ => Err(CoreError::NonUniqueExtension { mor: along, count: ks.len() }),
    }
}

/// Builds `K`, `T̃` and `ι` and records the diagnostics that certify the
/// result against its defining properties.
pub fn build_reflection(input: &CoreInput) -> Result<CoreResult, CoreError> {
    input.require_proper()?;
    let c = input.category().clone();
    let fs = check_factorization_assumption(input).map_err(CoreError::AssumptionUnavailable)?;
    let completions: Vec<Completion> = c.objects().map(|b| completion_factorization(input, &fs, b)).collect();

    let obj: Vec<ObjId> = completions.iter().map(|k| k.completion).collect();
    let mor = c
        .morphisms()
        .map(|f| unique_extension(input, completions[c.src(f)].rho, c.comp(completions[c.dst(f)].rho, f), f))
        .collect::<Result<Vec<_>, _>>()?;
    let k = FinFunctor::new(c.clone(), c.clone(), obj, mor).map_err(|e| CoreError::Internal(e.to_string()))?;
    let unit =
        FinNatTrans::new(FinFunctor::identity(c.clone()), k.clone(), completions.iter().map(|k| k.rho).collect())
            .map_err(|e| CoreError::Internal(e.to_string()))?;
    let mu = c
        .objects()
        .map(|b| {
            let kb = k.on_obj(b);
            unique_extension(input, completions[kb].rho, c.id(kb), c.id(kb))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let kk = k.then(&k).map_err(|e| CoreError::Internal(e.to_string()))?;
    let mu = FinNatTrans::new(kk, k.clone(), mu).map_err(|e| CoreError::Internal(e.to_string()))?;
    let ttilde = MonadData::new(k.clone(), unit, mu).map_err(|e| CoreError::Internal(e.to_string()))?;
    let iota = FinNatTrans::new(k, input.monad.functor().clone(), completions.iter().map(|k| k.iota).collect())
        .map_err(|e| CoreError::Internal(e.to_string()))?;

    let subcategory = complete_separated_objects(input);
    let mut diag = Report::new();
    diag.record("T̃ is idempotent", Scope::Exact, ttilde.is_idempotent(), || "μ̃ not invertible".to_string());
    diag.record_witness("ι is a monad morphism", Scope::Exact, monad_morphism_failure(&ttilde, &input.monad, &iota));
    diag.record_witness(
        "ι components are Σ-closed embeddings",
        Scope::Exact,
        completions.iter().position(|k| !fs.right.contains(k.iota)).map(|b| format!("object {b}")),
    );
    diag.record_witness(
        "ρ components are Σ-dense",
        Scope::Exact,
        completions.iter().position(|k| !fs.left.contains(k.rho)).map(|b| format!("object {b}")),
    );
    diag.record_witness(
        "KB is Σ-complete and T-separated",
        Scope::Exact,
        completions
            .iter()
            .position(|k| !(is_sigma_complete(input, k.completion) && is_t_separated(input, k.completion)))
            .map(|b| format!("object {b}")),
    );
    let mut members = alloc::vec![false; c.n_objects()];
    for &b in &subcategory {
        members[b] = true;
    }
    diag.record_witness(
        "ρ_B is a reflection into B_(T,Σ)",
        Scope::Exact,
        completions.iter().position(|k| !is_reflection_arrow(&c, &members, k.rho)).map(|b| format!("object {b}")),
    );
    diag.record_witness(
        "ρ_B is iso on B_(T,Σ)",
        Scope::Exact,
        subcategory.iter().find(|&&b| !c.is_iso(completions[b].rho)).map(|b| format!("object {b}")),
    );

    Ok(CoreResult {
        input: input.clone(),
        dense: fs.left.clone(),
        closed: fs.right.clone(),
        factorization: fs,
        completions,
        ttilde,
        iota,
        subcategory,
        diagnostics: diag,
    })
}

/// Reflection onto the `T`-separated objects (`Σ = ∅`).
pub fn separated_reflection(
    monad: MonadData,
    e_class: MorphismClass,
    m_class: MorphismClass,
) -> Result<CoreResult, CoreError> {
    let c = monad.category().clone();
    crate::factsys::check_factorization_system(&c, &e_class, &m_class).map_err(CoreError::NotFactorizationSystem)?;
    let input = CoreInput::new(monad, e_class, m_class, MorphismClass::empty(&c))?;
    build_reflection(&input)
}
