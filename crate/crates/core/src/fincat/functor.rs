use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::category::{FinCategory, MorId, ObjId};

/// A functor between finite categories, stored as object and morphism tables.
#[derive(Debug, Clone)]
pub struct FinFunctor {
    src: Arc<FinCategory>,
    dst: Arc<FinCategory>,
    obj: Vec<ObjId>,
    mor: Vec<MorId>,
}

impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        same_category(&self.src, &other.src)
            && same_category(&self.dst, &other.dst)
            && self.obj == other.obj
            && self.mor == other.mor
    }
}

impl Eq for FinFunctor {}

pub(crate) fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorError {
    BadLength,
    BadIndex(usize),
    /// `F f` does not run from `F(src f)` to `F(dst f)`.
    Endpoints(MorId),
    Identity(ObjId),
    /// `F(g∘f) != F g ∘ F f`.
    Composition {
        g: MorId,
        f: MorId,
    },
    CategoryMismatch,
}

impl fmt::Display for FunctorError {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorError::BadLength => write!(fm, "table length does not match the source category"),
            FunctorError::BadIndex(i) => write!(fm, "index {i} out of range"),
            FunctorError::Endpoints(f) => write!(fm, "image of morphism {f} has wrong endpoints"),
            FunctorError::Identity(o) => write!(fm, "identity of object {o} not preserved"),
            FunctorError::Composition { g, f } => write!(fm, "composite {g}∘{f} not preserved"),
            FunctorError::CategoryMismatch => write!(fm, "categories do not match"),
        }
    }
}

impl core::error::Error for FunctorError {}

impl FinFunctor {
    pub fn new(
        src: Arc<FinCategory>,
        dst: Arc<FinCategory>,
        obj: Vec<ObjId>,
        mor: Vec<MorId>,
    ) -> Result<Self, FunctorError> {
        if obj.len() != src.n_objects() || mor.len() != src.n_morphisms() {
            return Err(FunctorError::BadLength);
        }
        if let Some(&o) = obj.iter().find(|&&o| o >= dst.n_objects()) {
            return Err(FunctorError::BadIndex(o));
        }
        if let Some(&m) = mor.iter().find(|&&m| m >= dst.n_morphisms()) {
            return Err(FunctorError::BadIndex(m));
        }
        for f in src.morphisms() {
            if dst.src(mor[f]) != obj[src.src(f)] || dst.dst(mor[f]) != obj[src.dst(f)] {
                return Err(FunctorError::Endpoints(f));
            }
        }
        for o in src.objects() {
            if mor[src.id(o)] != dst.id(obj[o]) {
                return Err(FunctorError::Identity(o));
            }
        }
        for f in src.morphisms() {
            for g in src.morphisms() {
                if let Some(gf) = src.try_comp(g, f) {
                    if mor[gf] != dst.comp(mor[g], mor[f]) {
                        return Err(FunctorError::Composition { g, f });
                    }
                }
            }
        }
        Ok(FinFunctor { src, dst, obj, mor })
    }

    pub(crate) fn new_unchecked(
        src: Arc<FinCategory>,
        dst: Arc<FinCategory>,
        obj: Vec<ObjId>,
        mor: Vec<MorId>,
    ) -> Self {
        debug_assert!(FinFunctor::new(src.clone(), dst.clone(), obj.clone(), mor.clone()).is_ok());
        FinFunctor { src, dst, obj, mor }
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let obj = c.objects().collect();
        let mor = c.morphisms().collect();
        FinFunctor { src: c.clone(), dst: c, obj, mor }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor, FunctorError> {
        if !same_category(&self.dst, &other.src) {
            return Err(FunctorError::CategoryMismatch);
        }
        Ok(FinFunctor {
            src: self.src.clone(),
            dst: other.dst.clone(),
            obj: self.obj.iter().map(|&o| other.obj[o]).collect(),
            mor: self.mor.iter().map(|&m| other.mor[m]).collect(),
        })
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.src
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.dst
    }

    #[inline]
    pub fn on_obj(&self, o: ObjId) -> ObjId {
        self.obj[o]
    }

    #[inline]
    pub fn on_mor(&self, f: MorId) -> MorId {
        self.mor[f]
    }

    pub fn object_table(&self) -> &[ObjId] {
        &self.obj
    }

    pub fn morphism_table(&self) -> &[MorId] {
        &self.mor
    }

    pub fn is_endofunctor(&self) -> bool {
        same_category(&self.src, &self.dst)
    }

    /// Reflects isomorphisms: `F f` iso implies `f` iso.
    pub fn is_conservative(&self) -> bool {
        self.src.morphisms().all(|f| !self.dst.is_iso(self.mor[f]) || self.src.is_iso(f))
    }
}

/// A natural transformation between parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinNatTrans {
    src: FinFunctor,
    dst: FinFunctor,
    comp: Vec<MorId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NatTransError {
    NotParallel,
    BadLength,
    /// Component at the object has the wrong endpoints.
    BadComponent(ObjId),
    /// Naturality square fails for this morphism of the source category.
    NotNatural(MorId),
}

impl fmt::Display for NatTransError {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatTransError::NotParallel => write!(fm, "functors are not parallel"),
            NatTransError::BadLength => write!(fm, "component table length mismatch"),
            NatTransError::BadComponent(o) => write!(fm, "component at object {o} has wrong endpoints"),
            NatTransError::NotNatural(f) => write!(fm, "NotNatural at morphism {f}"),
        }
    }
}

impl core::error::Error for NatTransError {}

impl FinNatTrans {
    pub fn new(src: FinFunctor, dst: FinFunctor, comp: Vec<MorId>) -> Result<Self, NatTransError> {
        if !same_category(&src.src, &dst.src) || !same_category(&src.dst, &dst.dst) {
            return Err(NatTransError::NotParallel);
        }
        let c = &src.src;
        let d = &src.dst;
        if comp.len() != c.n_objects() {
            return Err(NatTransError::BadLength);
        }
        for o in c.objects() {
            let a = comp[o];
            if a >= d.n_morphisms() || d.src(a) != src.obj[o] || d.dst(a) != dst.obj[o] {
                return Err(NatTransError::BadComponent(o));
            }
        }
        for f in c.morphisms() {
            let (a, b) = (c.src(f), c.dst(f));
            if d.comp(dst.mor[f], comp[a]) != d.comp(comp[b], src.mor[f]) {
                return Err(NatTransError::NotNatural(f));
            }
        }
        Ok(FinNatTrans { src, dst, comp })
    }

    pub(crate) fn new_unchecked(src: FinFunctor, dst: FinFunctor, comp: Vec<MorId>) -> Self {
        debug_assert!(FinNatTrans::new(src.clone(), dst.clone(), comp.clone()).is_ok());
        FinNatTrans { src, dst, comp }
    }

    pub fn identity(f: &FinFunctor) -> Self {
        let d = &f.dst;
        let comp = f.obj.iter().map(|&o| d.id(o)).collect();
        FinNatTrans { src: f.clone(), dst: f.clone(), comp }
    }

    pub fn source(&self) -> &FinFunctor {
        &self.src
    }

    pub fn target(&self) -> &FinFunctor {
        &self.dst
    }

    #[inline]
    pub fn at(&self, o: ObjId) -> MorId {
        self.comp[o]
    }

    pub fn components(&self) -> &[MorId] {
        &self.comp
    }

    /// Vertical composite `other · self`.
    pub fn then(&self, other: &FinNatTrans) -> Result<FinNatTrans, NatTransError> {
        if self.dst != other.src {
            return Err(NatTransError::NotParallel);
        }
        let d = &self.src.dst;
        let comp = self.comp.iter().zip(&other.comp).map(|(&a, &b)| d.comp(b, a)).collect();
        Ok(FinNatTrans { src: self.src.clone(), dst: other.dst.clone(), comp })
    }

    /// Whiskering `α H` for `H: B → C` when `α` lives on `C`: components `α_{H b}`.
    pub fn precompose(&self, h: &FinFunctor) -> Result<FinNatTrans, NatTransError> {
        let src = h.then(&self.src).map_err(|_| NatTransError::NotParallel)?;
        let dst = h.then(&self.dst).map_err(|_| NatTransError::NotParallel)?;
        let comp = h.obj.iter().map(|&o| self.comp[o]).collect();
        Ok(FinNatTrans { src, dst, comp })
    }

    /// Whiskering `H α`: components `H(α_c)`.
    pub fn postcompose(&self, h: &FinFunctor) -> Result<FinNatTrans, NatTransError> {
        let src = self.src.then(h).map_err(|_| NatTransError::NotParallel)?;
        let dst = self.dst.then(h).map_err(|_| NatTransError::NotParallel)?;
        let comp = self.comp.iter().map(|&m| h.mor[m]).collect();
        Ok(FinNatTrans { src, dst, comp })
    }

    /// Componentwise inverse, when every component is iso.
    pub fn inverse(&self) -> Option<FinNatTrans> {
        let d = &self.src.dst;
        let comp = self.comp.iter().map(|&m| d.inverse(m)).collect::<Option<Vec<_>>>()?;
        Some(FinNatTrans { src: self.dst.clone(), dst: self.src.clone(), comp })
    }

    pub fn is_iso(&self) -> bool {
        let d = &self.src.dst;
        self.comp.iter().all(|&m| d.is_iso(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use alloc::vec;

    #[test]
    fn identity_functor_valid() {
        let c = Arc::new(presets::chain(3));
        let id = FinFunctor::identity(c.clone());
        assert!(FinFunctor::new(c.clone(), c, id.obj.clone(), id.mor.clone()).is_ok());
    }

    #[test]
    fn broken_functor_rejected() {
        let c = Arc::new(presets::poset2());
        // send 0→1 to the identity of 0 while moving 1 to 1
        let err = FinFunctor::new(c.clone(), c.clone(), vec![0, 1], vec![0, 1, 0]).unwrap_err();
        assert_eq!(err, FunctorError::Endpoints(2));
    }

    #[test]
    fn constant_transformation_not_natural() {
        let c = Arc::new(presets::poset2());
        let id = FinFunctor::identity(c.clone());
        let top = FinFunctor::new(c.clone(), c.clone(), vec![1, 1], vec![1, 1, 1]).unwrap();
        assert!(FinNatTrans::new(id.clone(), top.clone(), vec![2, 1]).is_ok());
        assert!(FinNatTrans::new(top, id, vec![2, 1]).is_err());
    }
}
