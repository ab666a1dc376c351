use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub type ObjId = usize;
pub type MorId = usize;

/// Unvalidated category description.
///
/// Composites are listed as `(g, f, g∘f)`. Entries whose left or right
/// factor is an identity may be omitted; they are filled in by validation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    /// `(name, src, dst)`.
    pub morphisms: Vec<(String, ObjId, ObjId)>,
    /// Identity morphism of each object.
    pub identities: Vec<MorId>,
    pub composites: Vec<(MorId, MorId, MorId)>,
}

impl RawCategory {
    /// Starts a description whose identities are generated: morphism `i` is
    /// the identity of object `i`, named `id_<object>`.
    pub fn with_objects<S: Into<String>>(objects: impl IntoIterator<Item = S>) -> Self {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let morphisms = objects.iter().enumerate().map(|(i, o)| (format!("id_{o}"), i, i)).collect();
        let identities = (0..objects.len()).collect();
        RawCategory { objects, morphisms, identities, composites: Vec::new() }
    }

    /// Adds a morphism and returns its id.
    pub fn arrow(&mut self, name: impl Into<String>, src: ObjId, dst: ObjId) -> MorId {
        self.morphisms.push((name.into(), src, dst));
        self.morphisms.len() - 1
    }

    /// Records `g ∘ f = h`.
    pub fn compose(&mut self, g: MorId, f: MorId, h: MorId) -> &mut Self {
        self.composites.push((g, f, h));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryError {
    BadIndex {
        what: &'static str,
        index: usize,
    },
    BadIdentity(ObjId),
    /// A composite was given for a pair `(g, f)` with `dst f != src g`.
    NotComposable {
        g: MorId,
        f: MorId,
    },
    /// The declared composite of `(g, f)` has the wrong endpoints.
    EndpointMismatch {
        g: MorId,
        f: MorId,
        h: MorId,
    },
    ConflictingComposite {
        g: MorId,
        f: MorId,
    },
    MissingComposite {
        f: MorId,
        g: MorId,
    },
    /// `(h∘g)∘f != h∘(g∘f)`.
    NonAssociative {
        f: MorId,
        g: MorId,
        h: MorId,
    },
}

impl fmt::Display for CategoryError {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryError::BadIndex { what, index } => write!(fm, "{what} index {index} out of range"),
            CategoryError::BadIdentity(o) => write!(fm, "BadIdentity({o})"),
            CategoryError::NotComposable { g, f } => write!(fm, "NotComposable(g={g}, f={f})"),
            CategoryError::EndpointMismatch { g, f, h } => {
                write!(fm, "EndpointMismatch(g={g}, f={f}, declared {h})")
            }
            CategoryError::ConflictingComposite { g, f } => write!(fm, "ConflictingComposite(g={g}, f={f})"),
            CategoryError::MissingComposite { f, g } => write!(fm, "MissingComposite(f={f}, g={g})"),
            CategoryError::NonAssociative { f, g, h } => write!(fm, "NonAssociative(f={f}, g={g}, h={h})"),
        }
    }
}

impl core::error::Error for CategoryError {}

/// A validated finite category stored as a total composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    src: Vec<ObjId>,
    dst: Vec<ObjId>,
    identity: Vec<MorId>,
    /// `comp[g * n_mor + f] = g∘f`, `usize::MAX` when not composable.
    comp: Vec<MorId>,
    /// `hom[a * n_obj + b]`, ascending.
    hom: Vec<Vec<MorId>>,
    /// Position of each morphism inside its hom list.
    hom_pos: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl FinCategory {
    pub fn from_raw(raw: &RawCategory) -> Result<Self, CategoryError> {
        let n_obj = raw.objects.len();
        let n_mor = raw.morphisms.len();
        let mut src = Vec::with_capacity(n_mor);
        let mut dst = Vec::with_capacity(n_mor);
        for &(_, s, d) in &raw.morphisms {
            if s >= n_obj {
                return Err(CategoryError::BadIndex { what: "object", index: s });
            }
            if d >= n_obj {
                return Err(CategoryError::BadIndex { what: "object", index: d });
            }
            src.push(s);
            dst.push(d);
        }
        if raw.identities.len() != n_obj {
            return Err(CategoryError::BadIndex { what: "identity list length", index: raw.identities.len() });
        }
        for (o, &i) in raw.identities.iter().enumerate() {
            if i >= n_mor {
                return Err(CategoryError::BadIndex { what: "morphism", index: i });
            }
            if src[i] != o || dst[i] != o {
                return Err(CategoryError::BadIdentity(o));
            }
        }
        let mut comp = vec![NONE; n_mor * n_mor];
        for &(g, f, h) in &raw.composites {
            for m in [g, f, h] {
                if m >= n_mor {
                    return Err(CategoryError::BadIndex { what: "morphism", index: m });
                }
            }
            if dst[f] != src[g] {
                return Err(CategoryError::NotComposable { g, f });
            }
            if src[h] != src[f] || dst[h] != dst[g] {
                return Err(CategoryError::EndpointMismatch { g, f, h });
            }
            let slot = &mut comp[g * n_mor + f];
            if *slot != NONE && *slot != h {
                return Err(CategoryError::ConflictingComposite { g, f });
            }
            *slot = h;
        }
        // identity composites: fill when absent, reject when contradicted
        for f in 0..n_mor {
            let il = raw.identities[dst[f]];
            let ir = raw.identities[src[f]];
            for (slot, obj) in [(il * n_mor + f, dst[f]), (f * n_mor + ir, src[f])] {
                if comp[slot] == NONE {
                    comp[slot] = f;
                } else if comp[slot] != f {
                    return Err(CategoryError::BadIdentity(obj));
                }
            }
        }
        for f in 0..n_mor {
            for g in 0..n_mor {
                if dst[f] == src[g] && comp[g * n_mor + f] == NONE {
                    return Err(CategoryError::MissingComposite { f, g });
                }
            }
        }
        for f in 0..n_mor {
            for g in 0..n_mor {
                if dst[f] != src[g] {
                    continue;
                }
                let gf = comp[g * n_mor + f];
                for h in 0..n_mor {
                    if dst[g] != src[h] {
                        continue;
                    }
                    let hg = comp[h * n_mor + g];
                    if comp[hg * n_mor + f] != comp[h * n_mor + gf] {
                        return Err(CategoryError::NonAssociative { f, g, h });
                    }
                }
            }
        }
        let mut hom = vec![Vec::new(); n_obj * n_obj];
        let mut hom_pos = vec![0; n_mor];
        for f in 0..n_mor {
            let h: &mut Vec<MorId> = &mut hom[src[f] * n_obj + dst[f]];
            hom_pos[f] = h.len();
            h.push(f);
        }
        Ok(FinCategory {
            obj_names: raw.objects.clone(),
            mor_names: raw.morphisms.iter().map(|m| m.0.clone()).collect(),
            src,
            dst,
            identity: raw.identities.clone(),
            comp,
            hom,
            hom_pos,
        })
    }

    /// Builds a category from endpoint lists and a composition closure.
    /// `compose(g, f)` is only called on composable pairs.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<(String, ObjId, ObjId)>,
        identities: Vec<MorId>,
        mut compose: impl FnMut(MorId, MorId) -> MorId,
    ) -> Result<Self, CategoryError> {
        let mut composites = Vec::new();
        for f in 0..morphisms.len() {
            for g in 0..morphisms.len() {
                if morphisms[f].2 == morphisms[g].1 {
                    composites.push((g, f, compose(g, f)));
                }
            }
        }
        FinCategory::from_raw(&RawCategory { objects, morphisms, identities, composites })
    }

    /// Inverse of [`FinCategory::from_raw`], listing every composite.
    pub fn to_raw(&self) -> RawCategory {
        let mut composites = Vec::new();
        for g in self.morphisms() {
            for f in self.morphisms() {
                if let Some(h) = self.try_comp(g, f) {
                    composites.push((g, f, h));
                }
            }
        }
        RawCategory {
            objects: self.obj_names.clone(),
            morphisms: self.morphisms().map(|f| (self.mor_names[f].clone(), self.src[f], self.dst[f])).collect(),
            identities: self.identity.clone(),
            composites,
        }
    }

    #[inline]
    pub fn n_objects(&self) -> usize {
        self.obj_names.len()
    }

    #[inline]
    pub fn n_morphisms(&self) -> usize {
        self.mor_names.len()
    }

    pub fn objects(&self) -> core::ops::Range<ObjId> {
        0..self.n_objects()
    }

    pub fn morphisms(&self) -> core::ops::Range<MorId> {
        0..self.n_morphisms()
    }

    #[inline]
    pub fn src(&self, f: MorId) -> ObjId {
        self.src[f]
    }

    #[inline]
    pub fn dst(&self, f: MorId) -> ObjId {
        self.dst[f]
    }

    #[inline]
    pub fn id(&self, o: ObjId) -> MorId {
        self.identity[o]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identity[self.src[f]] == f
    }

    pub fn obj_name(&self, o: ObjId) -> &str {
        &self.obj_names[o]
    }

    pub fn mor_name(&self, f: MorId) -> &str {
        &self.mor_names[f]
    }

    pub fn find_object(&self, name: &str) -> Option<ObjId> {
        self.obj_names.iter().position(|n| n == name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<MorId> {
        self.mor_names.iter().position(|n| n == name)
    }

    /// `g ∘ f`. Panics when `dst f != src g`.
    #[inline]
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        let h = self.comp[g * self.n_morphisms() + f];
        assert!(h != NONE, "composing non-composable morphisms {g} after {f}");
        h
    }

    #[inline]
    pub fn try_comp(&self, g: MorId, f: MorId) -> Option<MorId> {
        let h = self.comp[g * self.n_morphisms() + f];
        (h != NONE).then_some(h)
    }

    /// Morphisms `a → b` in ascending id order.
    #[inline]
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a * self.n_objects() + b]
    }

    /// Index of `f` in `hom(src f, dst f)`.
    #[inline]
    pub fn hom_pos(&self, f: MorId) -> usize {
        self.hom_pos[f]
    }

    /// Morphisms with codomain `c`, ascending.
    pub fn arrows_into(&self, c: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms().filter(move |&f| self.dst[f] == c)
    }

    /// Left cancellable: `f∘g = f∘h` implies `g = h`.
    pub fn is_mono(&self, f: MorId) -> bool {
        let a = self.src[f];
        self.objects().all(|x| {
            let hs = self.hom(x, a);
            let mut seen: Vec<MorId> = hs.iter().map(|&g| self.comp(f, g)).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Right cancellable: `g∘f = h∘f` implies `g = h`.
    pub fn is_epi(&self, f: MorId) -> bool {
        let b = self.dst[f];
        self.objects().all(|x| {
            let hs = self.hom(b, x);
            let mut seen: Vec<MorId> = hs.iter().map(|&g| self.comp(g, f)).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.src[f], self.dst[f]);
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.comp(g, f) == self.identity[a] && self.comp(f, g) == self.identity[b])
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    pub fn isomorphic(&self, a: ObjId, b: ObjId) -> bool {
        self.hom(a, b).iter().any(|&f| self.is_iso(f))
    }

    /// At most one morphism between any two objects.
    pub fn is_thin(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }

    /// Objects isomorphic to `a`, ascending.
    pub fn iso_class(&self, a: ObjId) -> Vec<ObjId> {
        self.objects().filter(|&b| self.isomorphic(a, b)).collect()
    }

    pub fn describe_morphism(&self, f: MorId) -> String {
        format!("{}:{}->{}", self.mor_names[f], self.obj_names[self.src[f]], self.obj_names[self.dst[f]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poset2() -> FinCategory {
        let mut raw = RawCategory::with_objects(["0", "1"]);
        raw.arrow("u", 0, 1);
        FinCategory::from_raw(&raw).unwrap()
    }

    #[test]
    fn terminal_is_valid() {
        let raw = RawCategory::with_objects(["*"]);
        let c = FinCategory::from_raw(&raw).unwrap();
        assert_eq!((c.n_objects(), c.n_morphisms()), (1, 1));
        assert!(c.is_mono(0) && c.is_epi(0) && c.is_iso(0));
    }

    #[test]
    fn poset2_arrow_is_mono_epi_not_iso() {
        let c = poset2();
        assert_eq!(c.n_morphisms(), 3);
        assert!(c.is_mono(2) && c.is_epi(2) && !c.is_iso(2));
        assert!(c.is_thin());
    }

    #[test]
    fn missing_composite_reported() {
        let mut raw = RawCategory::with_objects(["a", "b"]);
        let f = raw.arrow("f", 0, 1);
        let g = raw.arrow("g", 1, 0);
        raw.compose(f, g, 1);
        let err = FinCategory::from_raw(&raw).unwrap_err();
        assert_eq!(err, CategoryError::MissingComposite { f, g });
    }

    #[test]
    fn contradicting_identity_entry() {
        let mut raw = RawCategory::with_objects(["a"]);
        let e = raw.arrow("e", 0, 0);
        raw.compose(0, e, 0);
        assert_eq!(FinCategory::from_raw(&raw).unwrap_err(), CategoryError::BadIdentity(0));
    }

    #[test]
    fn non_associative_detected() {
        let mut raw = RawCategory::with_objects(["*"]);
        let a = raw.arrow("a", 0, 0);
        let b = raw.arrow("b", 0, 0);
        // (a∘a)∘a = b∘a = a but a∘(a∘a) = a∘b = b
        raw.compose(a, a, b).compose(a, b, b).compose(b, a, a).compose(b, b, b);
        assert!(matches!(FinCategory::from_raw(&raw), Err(CategoryError::NonAssociative { .. })));
    }

    #[test]
    fn round_trip_through_raw() {
        let c = poset2();
        assert_eq!(FinCategory::from_raw(&c.to_raw()).unwrap(), c);
    }
}
