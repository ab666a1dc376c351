use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::category::{FinCategory, MorId, ObjId};
use super::functor::{same_category, FinFunctor, FinNatTrans};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonadError {
    NotEndofunctor,
    /// Unit or multiplication has the wrong source or target functor.
    Shape(&'static str),
    /// `μ·ηT = id` (left) or `μ·Tη = id` (right) fails at the object.
    UnitLawFail {
        obj: ObjId,
        side: Side,
    },
    AssocFail(ObjId),
}

impl fmt::Display for MonadError {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadError::NotEndofunctor => write!(fm, "functor is not an endofunctor"),
            MonadError::Shape(w) => write!(fm, "{w} has the wrong source or target"),
            MonadError::UnitLawFail { obj, side } => write!(fm, "UnitLawFail({obj}, {side:?})"),
            MonadError::AssocFail(o) => write!(fm, "AssocFail({o})"),
        }
    }
}

impl core::error::Error for MonadError {}

/// A monad `(T, η, μ)` on a finite category with all laws verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadData {
    t: FinFunctor,
    eta: FinNatTrans,
    mu: FinNatTrans,
}

impl MonadData {
    /// Validates the unit and associativity laws. Naturality of `eta` and `mu`
    /// is already guaranteed by their types.
    pub fn new(t: FinFunctor, eta: FinNatTrans, mu: FinNatTrans) -> Result<Self, MonadError> {
        if !t.is_endofunctor() {
            return Err(MonadError::NotEndofunctor);
        }
        let c = t.source().clone();
        let id = FinFunctor::identity(c.clone());
        let tt = t.then(&t).expect("endofunctor");
        if *eta.source() != id || *eta.target() != t {
            return Err(MonadError::Shape("unit"));
        }
        if *mu.source() != tt || *mu.target() != t {
            return Err(MonadError::Shape("multiplication"));
        }
        for b in c.objects() {
            let tb = t.on_obj(b);
            if c.comp(mu.at(b), eta.at(tb)) != c.id(tb) {
                return Err(MonadError::UnitLawFail { obj: b, side: Side::Left });
            }
            if c.comp(mu.at(b), t.on_mor(eta.at(b))) != c.id(tb) {
                return Err(MonadError::UnitLawFail { obj: b, side: Side::Right });
            }
            if c.comp(mu.at(b), t.on_mor(mu.at(b))) != c.comp(mu.at(b), mu.at(tb)) {
                return Err(MonadError::AssocFail(b));
            }
        }
        Ok(MonadData { t, eta, mu })
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let id = FinFunctor::identity(c);
        let unit = FinNatTrans::identity(&id);
        MonadData { t: id, eta: unit.clone(), mu: unit }
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        self.t.source()
    }

    pub fn functor(&self) -> &FinFunctor {
        &self.t
    }

    pub fn unit(&self) -> &FinNatTrans {
        &self.eta
    }

    pub fn multiplication(&self) -> &FinNatTrans {
        &self.mu
    }

    #[inline]
    pub fn on_obj(&self, b: ObjId) -> ObjId {
        self.t.on_obj(b)
    }

    #[inline]
    pub fn on_mor(&self, f: MorId) -> MorId {
        self.t.on_mor(f)
    }

    #[inline]
    pub fn eta(&self, b: ObjId) -> MorId {
        self.eta.at(b)
    }

    #[inline]
    pub fn mu(&self, b: ObjId) -> MorId {
        self.mu.at(b)
    }

    /// Every component of `μ` is an isomorphism.
    pub fn is_idempotent(&self) -> bool {
        self.mu.is_iso()
    }

    /// For an idempotent monad, checks `μ⁻¹ = Tη = ηT` componentwise and
    /// returns the first offending object.
    pub fn idempotent_inverse_law(&self) -> Result<(), ObjId> {
        let c = self.category();
        for b in c.objects() {
            let inv = c.inverse(self.mu(b)).ok_or(b)?;
            if inv != self.on_mor(self.eta(b)) || inv != self.eta(self.on_obj(b)) {
                return Err(b);
            }
        }
        Ok(())
    }

    /// `{f | T f iso}`, ascending.
    pub fn inverted_morphisms(&self) -> Vec<MorId> {
        let c = self.category();
        c.morphisms().filter(|&f| c.is_iso(self.on_mor(f))).collect()
    }

    /// Objects whose unit component is an isomorphism.
    pub fn fixed_objects(&self) -> Vec<ObjId> {
        let c = self.category();
        c.objects().filter(|&b| c.is_iso(self.eta(b))).collect()
    }
}

/// `θ·η = η'` and `μ'·(θ∘θ) = θ·μ`, where `(θ∘θ)_B = θ_{TB} ∘ S(θ_B)`.
pub fn check_monad_morphism(s: &MonadData, t: &MonadData, theta: &FinNatTrans) -> bool {
    monad_morphism_failure(s, t, theta).is_none()
}

/// First object at which `theta` fails to be a monad morphism.
pub fn monad_morphism_failure(s: &MonadData, t: &MonadData, theta: &FinNatTrans) -> Option<String> {
    let c = s.category();
    if !same_category(c, t.category()) || theta.source() != s.functor() || theta.target() != t.functor() {
        return Some(String::from("shape mismatch"));
    }
    for b in c.objects() {
        if c.comp(theta.at(b), s.eta(b)) != t.eta(b) {
            return Some(format!("unit condition fails at object {b}"));
        }
        let tb = t.on_obj(b);
        let both = c.comp(theta.at(tb), s.on_mor(theta.at(b)));
        if c.comp(t.mu(b), both) != c.comp(theta.at(b), s.mu(b)) {
            return Some(format!("multiplication condition fails at object {b}"));
        }
    }
    None
}

/// For idempotent `s`, the candidate `(η^S T)⁻¹ · S η^T`, returned only when it
/// is a natural monad morphism.
pub fn unique_morphism_from_idempotent(s: &MonadData, t: &MonadData) -> Option<FinNatTrans> {
    if !s.is_idempotent() || !same_category(s.category(), t.category()) {
        return None;
    }
    let c = s.category();
    let mut comp = Vec::with_capacity(c.n_objects());
    for b in c.objects() {
        let inv = c.inverse(s.eta(t.on_obj(b)))?;
        comp.push(c.comp(inv, s.on_mor(t.eta(b))));
    }
    let theta = FinNatTrans::new(s.functor().clone(), t.functor().clone(), comp).ok()?;
    check_monad_morphism(s, t, &theta).then_some(theta)
}

/// Compares the restriction of `theta` along a reflection: `θ·ρ = η'` where
/// `ρ` is the unit of `s`.
pub fn agrees_with_unit(s: &MonadData, t: &MonadData, theta: &FinNatTrans) -> bool {
    let c = s.category();
    c.objects().all(|b| c.comp(theta.at(b), s.eta(b)) == t.eta(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdjunctionError {
    Shape(&'static str),
    /// `εF·Fη = id` (left) or `Gε·ηG = id` (right) fails at the object.
    TriangleFail {
        side: Side,
        obj: ObjId,
    },
}

impl fmt::Display for AdjunctionError {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdjunctionError::Shape(w) => write!(fm, "{w} has the wrong shape"),
            AdjunctionError::TriangleFail { side, obj } => write!(fm, "TriangleFail({side:?}, {obj})"),
        }
    }
}

impl core::error::Error for AdjunctionError {}

/// `F ⊣ G` with `F: C → D`, unit `η: 1 → GF` and counit `ε: FG → 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionData {
    left: FinFunctor,
    right: FinFunctor,
    eta: FinNatTrans,
    eps: FinNatTrans,
}

impl AdjunctionData {
    pub fn new(
        left: FinFunctor,
        right: FinFunctor,
        eta: FinNatTrans,
        eps: FinNatTrans,
    ) -> Result<Self, AdjunctionError> {
        let c = left.source().clone();
        let d = left.target().clone();
        if !same_category(right.source(), &d) || !same_category(right.target(), &c) {
            return Err(AdjunctionError::Shape("functor pair"));
        }
        let gf = left.then(&right).expect("checked");
        let fg = right.then(&left).expect("checked");
        if *eta.source() != FinFunctor::identity(c.clone()) || *eta.target() != gf {
            return Err(AdjunctionError::Shape("unit"));
        }
        if *eps.source() != fg || *eps.target() != FinFunctor::identity(d.clone()) {
            return Err(AdjunctionError::Shape("counit"));
        }
        for x in c.objects() {
            let fx = left.on_obj(x);
            if d.comp(eps.at(fx), left.on_mor(eta.at(x))) != d.id(fx) {
                return Err(AdjunctionError::TriangleFail { side: Side::Left, obj: x });
            }
        }
        for y in d.objects() {
            let gy = right.on_obj(y);
            if c.comp(right.on_mor(eps.at(y)), eta.at(gy)) != c.id(gy) {
                return Err(AdjunctionError::TriangleFail { side: Side::Right, obj: y });
            }
        }
        Ok(AdjunctionData { left, right, eta, eps })
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let id = FinFunctor::identity(c);
        let unit = FinNatTrans::identity(&id);
        AdjunctionData { left: id.clone(), right: id, eta: unit.clone(), eps: unit }
    }

    pub fn left(&self) -> &FinFunctor {
        &self.left
    }

    pub fn right(&self) -> &FinFunctor {
        &self.right
    }

    pub fn unit(&self) -> &FinNatTrans {
        &self.eta
    }

    pub fn counit(&self) -> &FinNatTrans {
        &self.eps
    }

    /// `(GF, η, GεF)`.
    pub fn induced_monad(&self) -> MonadData {
        let t = self.left.then(&self.right).expect("adjoint pair");
        let c = self.left.source();
        let tt = t.then(&t).expect("endofunctor");
        let mu: Vec<MorId> = c.objects().map(|x| self.right.on_mor(self.eps.at(self.left.on_obj(x)))).collect();
        let mu = FinNatTrans::new_unchecked(tt, t.clone(), mu);
        MonadData::new(t, self.eta.clone(), mu).expect("adjunctions induce monads")
    }

    /// `self` followed by `outer`: `F2F1 ⊣ G1G2`.
    pub fn then(&self, outer: &AdjunctionData) -> Result<AdjunctionData, AdjunctionError> {
        if !same_category(self.left.target(), outer.left.source()) {
            return Err(AdjunctionError::Shape("composable pair"));
        }
        let c = self.left.source();
        let e = outer.left.target();
        let left = self.left.then(&outer.left).expect("checked");
        let right = outer.right.then(&self.right).expect("checked");
        let eta: Vec<MorId> =
            c.objects().map(|x| c.comp(self.right.on_mor(outer.eta.at(self.left.on_obj(x))), self.eta.at(x))).collect();
        let eps: Vec<MorId> = e
            .objects()
            .map(|z| e.comp(outer.eps.at(z), outer.left.on_mor(self.eps.at(outer.right.on_obj(z)))))
            .collect();
        let gf = left.then(&right).expect("checked");
        let fg = right.then(&left).expect("checked");
        let eta = FinNatTrans::new(FinFunctor::identity(c.clone()), gf, eta)
            .map_err(|_| AdjunctionError::Shape("composite unit"))?;
        let eps = FinNatTrans::new(fg, FinFunctor::identity(e.clone()), eps)
            .map_err(|_| AdjunctionError::Shape("composite counit"))?;
        AdjunctionData::new(left, right, eta, eps)
    }
}

/// A Kleisli morphism `a ⇝ b` is a base morphism `a → T b`.
#[derive(Debug, Clone)]
pub struct Kleisli {
    pub category: Arc<FinCategory>,
    pub adjunction: AdjunctionData,
    /// Base morphism underlying each Kleisli morphism.
    pub underlying: Vec<MorId>,
}

/// Kleisli category with `F_T ⊣ G_T`; its induced monad equals `m`.
pub fn build_kleisli(m: &MonadData) -> Kleisli {
    let c = m.category().clone();
    let n = c.n_objects();
    let mut morphisms = Vec::new();
    let mut underlying = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for &f in c.hom(a, m.on_obj(b)) {
                // a base morphism a → Tb may be reached from several b when T
                // identifies objects, so keep (a, b, f) keyed by position
                morphisms.push((format!("{}~{}", c.mor_name(f), c.obj_name(b)), a, b));
                underlying.push(f);
            }
        }
    }
    let index: BTreeMap<(ObjId, ObjId, MorId), MorId> =
        morphisms.iter().zip(&underlying).enumerate().map(|(k, (m, &f))| ((m.1, m.2, f), k)).collect();
    let lookup = |a: ObjId, b: ObjId, f: MorId| -> MorId { index[&(a, b, f)] };
    let identities: Vec<MorId> = (0..n).map(|a| lookup(a, a, m.eta(a))).collect();
    let mut composites = Vec::new();
    for (kf, &(_, a, b)) in morphisms.iter().enumerate() {
        for (kg, &(_, b2, c2)) in morphisms.iter().enumerate() {
            if b2 != b {
                continue;
            }
            let h = c.comp(m.mu(c2), c.comp(m.on_mor(underlying[kg]), underlying[kf]));
            composites.push((kg, kf, lookup(a, c2, h)));
        }
    }
    let objects = c.objects().map(|o| String::from(c.obj_name(o))).collect();
    let raw = super::category::RawCategory { objects, morphisms, identities, composites };
    let kl = Arc::new(FinCategory::from_raw(&raw).expect("Kleisli category is a category"));

    let f_obj: Vec<ObjId> = (0..n).collect();
    let f_mor: Vec<MorId> = c.morphisms().map(|f| lookup(c.src(f), c.dst(f), c.comp(m.eta(c.dst(f)), f))).collect();
    let left = FinFunctor::new(c.clone(), kl.clone(), f_obj, f_mor).expect("free functor");
    let g_obj: Vec<ObjId> = (0..n).map(|a| m.on_obj(a)).collect();
    let g_mor: Vec<MorId> = kl.morphisms().map(|k| c.comp(m.mu(kl.dst(k)), m.on_mor(underlying[k]))).collect();
    let right = FinFunctor::new(kl.clone(), c.clone(), g_obj, g_mor).expect("forgetful functor");
    let gf = left.then(&right).expect("composable");
    let fg = right.then(&left).expect("composable");
    let eta =
        FinNatTrans::new(FinFunctor::identity(c.clone()), gf, m.unit().components().to_vec()).expect("unit natural");
    let eps_comp: Vec<MorId> = (0..n).map(|a| lookup(m.on_obj(a), a, c.id(m.on_obj(a)))).collect();
    let eps = FinNatTrans::new(fg, FinFunctor::identity(kl.clone()), eps_comp).expect("counit natural");
    let adjunction = AdjunctionData::new(left, right, eta, eps).expect("Kleisli adjunction");
    Kleisli { category: kl, adjunction, underlying }
}

/// A natural isomorphism `T1 → T2` that is also a monad morphism, found by
/// exhaustive search over components.
pub fn monad_isomorphism(m1: &MonadData, m2: &MonadData) -> Option<FinNatTrans> {
    let c = m1.category();
    if !same_category(c, m2.category()) {
        return None;
    }
    let candidates: Vec<Vec<MorId>> = c
        .objects()
        .map(|b| c.hom(m1.on_obj(b), m2.on_obj(b)).iter().copied().filter(|&f| c.is_iso(f)).collect())
        .collect();
    let mut found = None;
    super::enumerate::for_each_choice(&candidates, &mut |comp: &[MorId]| {
        if let Ok(theta) = FinNatTrans::new(m1.functor().clone(), m2.functor().clone(), comp.to_vec()) {
            if check_monad_morphism(m1, m2, &theta) {
                found = Some(theta);
                return false;
            }
        }
        true
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use alloc::vec;

    fn const_top_poset2() -> MonadData {
        let c = Arc::new(presets::poset2());
        let t = FinFunctor::new(c.clone(), c.clone(), vec![1, 1], vec![1, 1, 1]).unwrap();
        let eta = FinNatTrans::new(FinFunctor::identity(c.clone()), t.clone(), vec![2, 1]).unwrap();
        let tt = t.then(&t).unwrap();
        let mu = FinNatTrans::new(tt, t.clone(), vec![1, 1]).unwrap();
        MonadData::new(t, eta, mu).unwrap()
    }

    #[test]
    fn identity_monad_is_idempotent() {
        let m = MonadData::identity(Arc::new(presets::chain(3)));
        assert!(m.is_idempotent());
        assert_eq!(m.idempotent_inverse_law(), Ok(()));
    }

    #[test]
    fn closure_operator_monad() {
        let m = const_top_poset2();
        assert!(m.is_idempotent());
        assert_eq!(m.fixed_objects(), vec![1]);
        assert_eq!(m.inverted_morphisms(), vec![0, 1, 2]);
    }

    #[test]
    fn unit_is_unique_morphism_from_identity() {
        let m = const_top_poset2();
        let id = MonadData::identity(m.category().clone());
        let theta = unique_morphism_from_idempotent(&id, &m).unwrap();
        assert_eq!(theta, *m.unit());
        assert!(check_monad_morphism(&id, &m, m.unit()));
    }

    #[test]
    fn kleisli_of_const_top() {
        let m = const_top_poset2();
        let k = build_kleisli(&m);
        assert_eq!(k.category.hom(0, 1).len(), 1);
        assert_eq!(k.category.hom(0, 0).len(), 1);
        assert_eq!(k.adjunction.induced_monad(), m);
    }

    #[test]
    fn kleisli_of_identity_is_base() {
        let c = Arc::new(presets::parallel_pair());
        let m = MonadData::identity(c.clone());
        let k = build_kleisli(&m);
        assert_eq!(k.category.n_morphisms(), c.n_morphisms());
        assert_eq!(k.adjunction.induced_monad(), m);
    }

    #[test]
    fn identity_adjunction_and_composite() {
        let c = Arc::new(presets::poset2());
        let id = AdjunctionData::identity(c.clone());
        assert_eq!(id.induced_monad(), MonadData::identity(c.clone()));
        let k = build_kleisli(&const_top_poset2());
        let comp = id.then(&k.adjunction).unwrap();
        assert_eq!(comp.induced_monad(), const_top_poset2());
    }

    #[test]
    fn unit_law_violation_detected() {
        // one-object monoid {1, e} with e∘e = e; T = id, η = id, μ = e
        let c = Arc::new(presets::idempotent_monoid());
        let t = FinFunctor::identity(c.clone());
        let eta = FinNatTrans::identity(&t);
        let mu = FinNatTrans::new(t.then(&t).unwrap(), t.clone(), vec![1]).unwrap();
        assert_eq!(MonadData::new(t, eta, mu).unwrap_err(), MonadError::UnitLawFail { obj: 0, side: Side::Left });
    }
}
