//! Morphism classes of a finite category and ordinary orthogonality.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::fincat::{FinCategory, MorId, ObjId};

/// A set of morphisms of a fixed finite category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorphismClass {
    members: Vec<bool>,
}

impl MorphismClass {
    pub fn empty(c: &FinCategory) -> Self {
        MorphismClass { members: vec![false; c.n_morphisms()] }
    }

    pub fn all(c: &FinCategory) -> Self {
        MorphismClass { members: vec![true; c.n_morphisms()] }
    }

    pub fn from_fn(c: &FinCategory, mut pred: impl FnMut(MorId) -> bool) -> Self {
        MorphismClass { members: c.morphisms().map(&mut pred).collect() }
    }

    pub fn from_ids(c: &FinCategory, ids: &[MorId]) -> Self {
        let mut members = vec![false; c.n_morphisms()];
        for &f in ids {
            members[f] = true;
        }
        MorphismClass { members }
    }

    pub fn isos(c: &FinCategory) -> Self {
        Self::from_fn(c, |f| c.is_iso(f))
    }

    pub fn monos(c: &FinCategory) -> Self {
        Self::from_fn(c, |f| c.is_mono(f))
    }

    pub fn epis(c: &FinCategory) -> Self {
        Self::from_fn(c, |f| c.is_epi(f))
    }

    pub fn identities(c: &FinCategory) -> Self {
        Self::from_fn(c, |f| c.is_identity(f))
    }

    #[inline]
    pub fn contains(&self, f: MorId) -> bool {
        self.members[f]
    }

    pub fn insert(&mut self, f: MorId) {
        self.members[f] = true;
    }

    pub fn ids(&self) -> Vec<MorId> {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(f, _)| f).collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &MorphismClass) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    pub fn union(&self, other: &MorphismClass) -> MorphismClass {
        MorphismClass { members: self.members.iter().zip(&other.members).map(|(&a, &b)| a || b).collect() }
    }

    pub fn intersection(&self, other: &MorphismClass) -> MorphismClass {
        MorphismClass { members: self.members.iter().zip(&other.members).map(|(&a, &b)| a && b).collect() }
    }

    /// First morphism in `self` but not in `other`.
    pub fn first_outside(&self, other: &MorphismClass) -> Option<MorId> {
        self.members.iter().zip(&other.members).position(|(&a, &b)| a && !b)
    }

    /// First morphism on which the two classes differ.
    pub fn first_difference(&self, other: &MorphismClass) -> Option<MorId> {
        self.members.iter().zip(&other.members).position(|(&a, &b)| a != b)
    }
}

/// A commuting square `v∘e = m∘u` without exactly one diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareWitness {
    pub u: MorId,
    pub v: MorId,
    pub diagonals: usize,
}

/// Number of diagonals `d` with `d∘e = u` and `m∘d = v`.
pub fn count_diagonals(c: &FinCategory, e: MorId, m: MorId, u: MorId, v: MorId) -> usize {
    c.hom(c.dst(e), c.src(m)).iter().filter(|&&d| c.comp(d, e) == u && c.comp(m, d) == v).count()
}

/// The least square `(u, v)` from `e` to `m` without a unique diagonal.
pub fn orthogonality_witness(c: &FinCategory, e: MorId, m: MorId) -> Option<SquareWitness> {
    let (a1, a2) = (c.src(e), c.dst(e));
    let (b1, b2) = (c.src(m), c.dst(m));
    for &u in c.hom(a1, b1) {
        for &v in c.hom(a2, b2) {
            if c.comp(v, e) != c.comp(m, u) {
                continue;
            }
            let n = count_diagonals(c, e, m, u, v);
            if n != 1 {
                return Some(SquareWitness { u, v, diagonals: n });
            }
        }
    }
    None
}

/// `e ↓ m`: every commuting square has exactly one diagonal.
pub fn ordinary_orthogonal(c: &FinCategory, e: MorId, m: MorId) -> bool {
    orthogonality_witness(c, e, m).is_none()
}

/// `f ⊥ b`: precomposition with `f: a1 → a2` is a bijection
/// `hom(a2, b) → hom(a1, b)`.
pub fn object_orthogonal(c: &FinCategory, f: MorId, b: ObjId) -> bool {
    let (a1, a2) = (c.src(f), c.dst(f));
    let target = c.hom(a1, b);
    let source = c.hom(a2, b);
    if target.len() != source.len() {
        return false;
    }
    let mut hit = vec![false; target.len()];
    for &g in source {
        let k = c.hom_pos(c.comp(g, f));
        if hit[k] {
            return false;
        }
        hit[k] = true;
    }
    true
}

/// `Σ^↓ = {m | e ↓ m for all e ∈ Σ}`.
pub fn orth_right(c: &FinCategory, sigma: &MorphismClass) -> MorphismClass {
    let left = sigma.ids();
    MorphismClass::from_fn(c, |m| left.iter().all(|&e| ordinary_orthogonal(c, e, m)))
}

/// `M^↑ = {e | e ↓ m for all m ∈ M}`.
pub fn orth_left(c: &FinCategory, m: &MorphismClass) -> MorphismClass {
    let right = m.ids();
    MorphismClass::from_fn(c, |e| right.iter().all(|&k| ordinary_orthogonal(c, e, k)))
}

/// `Σ^⊥`, the objects orthogonal to every member of `sigma`.
pub fn sigma_perp_objects(c: &FinCategory, sigma: &MorphismClass) -> Vec<ObjId> {
    let fs = sigma.ids();
    c.objects().filter(|&b| fs.iter().all(|&f| object_orthogonal(c, f, b))).collect()
}

/// `C^⊤`, the morphisms orthogonal to every object of `objects`.
pub fn objects_top(c: &FinCategory, objects: &[ObjId]) -> MorphismClass {
    MorphismClass::from_fn(c, |f| objects.iter().all(|&b| object_orthogonal(c, f, b)))
}

/// Names a morphism for witnesses.
pub fn describe(c: &FinCategory, f: MorId) -> String {
    format!("{} (#{}: {} -> {})", c.mor_name(f), f, c.obj_name(c.src(f)), c.obj_name(c.dst(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;

    fn finset12() -> FinCategory {
        presets::finset(&[1, 2])
    }

    #[test]
    fn surjection_orthogonal_to_injection() {
        let c = finset12();
        let surj = c.find_morphism("2>1:[0,0]").unwrap();
        let inj = c.find_morphism("1>2:[0]").unwrap();
        assert!(ordinary_orthogonal(&c, surj, inj));
    }

    #[test]
    fn isos_orthogonal_to_everything() {
        for c in [finset12(), presets::parallel_pair(), presets::diamond()] {
            for e in c.morphisms().filter(|&e| c.is_iso(e)) {
                assert!(c.morphisms().all(|m| ordinary_orthogonal(&c, e, m)));
            }
        }
    }

    #[test]
    fn objects_top_of_everything_is_iso() {
        for c in [finset12(), presets::parallel_pair(), presets::chain(4), presets::finset(&[0, 1, 2])] {
            let all: Vec<ObjId> = c.objects().collect();
            assert_eq!(objects_top(&c, &all), MorphismClass::isos(&c));
        }
    }

    #[test]
    fn orth_right_of_empty_is_all() {
        let c = presets::n5();
        assert_eq!(orth_right(&c, &MorphismClass::empty(&c)), MorphismClass::all(&c));
    }

    #[test]
    fn collapse_orthogonal_to_one_not_two() {
        let c = finset12();
        let surj = c.find_morphism("2>1:[0,0]").unwrap();
        let one = c.find_object("1").unwrap();
        let two = c.find_object("2").unwrap();
        assert!(object_orthogonal(&c, surj, one));
        assert!(!object_orthogonal(&c, surj, two));
    }

    #[test]
    fn perp_top_perp_is_perp() {
        let c = presets::finset(&[0, 1, 2]);
        for f in c.morphisms() {
            let sigma = MorphismClass::from_ids(&c, &[f]);
            let perp = sigma_perp_objects(&c, &sigma);
            assert_eq!(sigma_perp_objects(&c, &objects_top(&c, &perp)), perp);
        }
    }
}
