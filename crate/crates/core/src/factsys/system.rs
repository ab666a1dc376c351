//! Prefactorization and factorization systems on a finite category.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::class::{describe, orth_left, orth_right, orthogonality_witness, MorphismClass};
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::report::{Report, Scope};

/// First violated axiom of a (pre)factorization system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `e ∈ E`, `m ∈ M` but `e ↓ m` fails on the square `(u, v)`.
    NotOrthogonal {
        e: MorId,
        m: MorId,
        u: MorId,
        v: MorId,
        diagonals: usize,
    },
    /// `f ∈ E^↓` but `f ∉ M`.
    RightClassTooSmall(MorId),
    /// `f ∈ M^↑` but `f ∉ E`.
    LeftClassTooSmall(MorId),
    NoFactorization(MorId),
    /// A member of `E` that is not epi.
    LeftNotEpi(MorId),
    /// A member of `M` that is not mono.
    RightNotMono(MorId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotOrthogonal { e, m, u, v, diagonals } => {
                write!(f, "e={e} m={m}: square u={u} v={v} has {diagonals} diagonals")
            }
            Violation::RightClassTooSmall(m) => write!(f, "morphism {m} is in E^↓ but not in M"),
            Violation::LeftClassTooSmall(e) => write!(f, "morphism {e} is in M^↑ but not in E"),
            Violation::NoFactorization(g) => write!(f, "morphism {g} has no (E, M)-factorization"),
            Violation::LeftNotEpi(e) => write!(f, "morphism {e} in E is not epi"),
            Violation::RightNotMono(m) => write!(f, "morphism {m} in M is not mono"),
        }
    }
}

/// `E^↓ = M` and `M^↑ = E`.
pub fn check_prefactorization(c: &FinCategory, e: &MorphismClass, m: &MorphismClass) -> Result<(), Violation> {
    for ei in e.ids() {
        for mi in m.ids() {
            if let Some(w) = orthogonality_witness(c, ei, mi) {
                return Err(Violation::NotOrthogonal { e: ei, m: mi, u: w.u, v: w.v, diagonals: w.diagonals });
            }
        }
    }
    if let Some(f) = orth_right(c, e).first_outside(m) {
        return Err(Violation::RightClassTooSmall(f));
    }
    if let Some(f) = orth_left(c, m).first_outside(e) {
        return Err(Violation::LeftClassTooSmall(f));
    }
    Ok(())
}

/// `E ⊆ Epi` and `M ⊆ Mono`.
pub fn check_proper(c: &FinCategory, e: &MorphismClass, m: &MorphismClass) -> Result<(), Violation> {
    if let Some(f) = e.ids().into_iter().find(|&f| !c.is_epi(f)) {
        return Err(Violation::LeftNotEpi(f));
    }
    if let Some(f) = m.ids().into_iter().find(|&f| !c.is_mono(f)) {
        return Err(Violation::RightNotMono(f));
    }
    Ok(())
}

/// The least factorization `f = m∘e` with `e ∈ left`, `m ∈ right`, ordered by
/// middle object, then `e`, then `m`.
pub fn least_factorization(
    c: &FinCategory,
    left: &MorphismClass,
    right: &MorphismClass,
    f: MorId,
) -> Option<(MorId, MorId)> {
    let (a, b) = (c.src(f), c.dst(f));
    c.objects().find_map(|x| {
        c.hom(a, x)
            .iter()
            .filter(|&&e| left.contains(e))
            .find_map(|&e| c.hom(x, b).iter().find(|&&m| right.contains(m) && c.comp(m, e) == f).map(|&m| (e, m)))
    })
}

/// A validated factorization system with its chosen factorizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationSystem {
    pub left: MorphismClass,
    pub right: MorphismClass,
    /// `factorizer[f] = (e, m)` with `m∘e = f`.
    pub factorizer: Vec<(MorId, MorId)>,
}

impl FactorizationSystem {
    pub fn factor(&self, f: MorId) -> (MorId, MorId) {
        self.factorizer[f]
    }

    /// Middle object of the chosen factorization of `f`.
    pub fn middle(&self, c: &FinCategory, f: MorId) -> ObjId {
        c.dst(self.factorizer[f].0)
    }
}

/// Validates `(E, M)` and computes factorizations of every morphism.
pub fn check_factorization_system(
    c: &FinCategory,
    e: &MorphismClass,
    m: &MorphismClass,
) -> Result<FactorizationSystem, Violation> {
    check_prefactorization(c, e, m)?;
    let factorizer = c
        .morphisms()
        .map(|f| least_factorization(c, e, m, f).ok_or(Violation::NoFactorization(f)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FactorizationSystem { left: e.clone(), right: m.clone(), factorizer })
}

/// A pullback square `f∘p1 = g∘p2` with its apex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PullbackCone {
    pub apex: ObjId,
    pub p1: MorId,
    pub p2: MorId,
}

/// Least pullback of `f: a → z` and `g: b → z`, if one exists.
pub fn pullback(c: &FinCategory, f: MorId, g: MorId) -> Option<PullbackCone> {
    let (a, b) = (c.src(f), c.src(g));
    let cones: Vec<PullbackCone> = c
        .objects()
        .flat_map(|q| {
            c.hom(q, a).iter().flat_map(move |&q1| {
                c.hom(q, b).iter().filter(move |&&q2| c.comp(f, q1) == c.comp(g, q2)).map(move |&q2| PullbackCone {
                    apex: q,
                    p1: q1,
                    p2: q2,
                })
            })
        })
        .collect();
    cones.iter().copied().find(|p| {
        cones.iter().all(|q| {
            c.hom(q.apex, p.apex).iter().filter(|&&k| c.comp(p.p1, k) == q.p1 && c.comp(p.p2, k) == q.p2).count() == 1
        })
    })
}

/// Stability properties of a prefactorization system `(E, M)`, exhaustively.
pub fn stability_report(c: &FinCategory, e: &MorphismClass, m: &MorphismClass) -> Report {
    let mut r = Report::new();
    let comp_pairs = |cls: &MorphismClass| -> Option<String> {
        for f in cls.ids() {
            for g in cls.ids() {
                if let Some(h) = c.try_comp(g, f) {
                    if !cls.contains(h) {
                        return Some(format!("{} ∘ {}", describe(c, g), describe(c, f)));
                    }
                }
            }
        }
        None
    };
    r.record_witness("isos lie in both classes", Scope::Exact, {
        MorphismClass::isos(c).first_outside(&e.intersection(m)).map(|f| describe(c, f))
    });
    r.record_witness("E closed under composition", Scope::Exact, comp_pairs(e));
    r.record_witness("M closed under composition", Scope::Exact, comp_pairs(m));
    let mut pb = None;
    'outer: for mi in m.ids() {
        for f in c.morphisms().filter(|&f| c.dst(f) == c.dst(mi)) {
            if let Some(p) = pullback(c, mi, f) {
                // the projection parallel to m
                if !m.contains(p.p2) {
                    pb = Some(format!("pullback of {} along {}", describe(c, mi), describe(c, f)));
                    break 'outer;
                }
            }
        }
    }
    r.record_witness("M stable under pullback", Scope::Exact, pb);
    let mut cancel = None;
    let mut epi_cancel = None;
    let left_epi = e.ids().iter().all(|&f| c.is_epi(f));
    for f in c.morphisms() {
        for g in c.morphisms() {
            if let Some(h) = c.try_comp(g, f) {
                if m.contains(h) && !m.contains(f) {
                    if m.contains(g) && cancel.is_none() {
                        cancel = Some(format!("{} ∘ {}", describe(c, g), describe(c, f)));
                    }
                    if left_epi && epi_cancel.is_none() {
                        epi_cancel = Some(format!("{} ∘ {}", describe(c, g), describe(c, f)));
                    }
                }
            }
        }
    }
    r.record_witness("g∘f, g ∈ M implies f ∈ M", Scope::Exact, cancel);
    if left_epi {
        r.record_witness("E ⊆ Epi: g∘f ∈ M implies f ∈ M", Scope::Exact, epi_cancel);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;

    #[test]
    fn iso_all_on_posets() {
        for c in [presets::chain(4), presets::diamond(), presets::n5()] {
            let (e, m) = (MorphismClass::isos(&c), MorphismClass::all(&c));
            let fs = check_factorization_system(&c, &e, &m).unwrap();
            assert!(fs.factorizer.iter().all(|&(e, _)| c.is_identity(e)));
            assert_eq!(check_proper(&c, &e, &m), Ok(()));
        }
    }

    #[test]
    fn all_iso_is_dual() {
        let c = presets::parallel_pair();
        let (e, m) = (MorphismClass::all(&c), MorphismClass::isos(&c));
        assert!(check_factorization_system(&c, &e, &m).is_ok());
    }

    #[test]
    fn iso_all_not_proper_with_collapse() {
        let c = presets::finset(&[1, 2]);
        let (e, m) = (MorphismClass::isos(&c), MorphismClass::all(&c));
        assert!(check_prefactorization(&c, &e, &m).is_ok());
        assert!(matches!(check_proper(&c, &e, &m), Err(Violation::RightNotMono(_))));
    }

    #[test]
    fn surj_inj_on_finite_sets() {
        let c = presets::finset(&[0, 1, 2]);
        let (e, m) = (MorphismClass::epis(&c), MorphismClass::monos(&c));
        let fs = check_factorization_system(&c, &e, &m).unwrap();
        assert_eq!(check_proper(&c, &fs.left, &fs.right), Ok(()));
        assert!(stability_report(&c, &e, &m).all_passed());
    }

    #[test]
    fn mismatched_classes_rejected() {
        let c = presets::chain(3);
        let e = MorphismClass::isos(&c);
        let m = MorphismClass::isos(&c);
        assert!(matches!(check_prefactorization(&c, &e, &m), Err(Violation::RightClassTooSmall(_))));
    }

    #[test]
    fn pullbacks_in_chain_are_meets() {
        let c = presets::chain(3);
        let f = c.find_morphism("0<2").unwrap();
        let g = c.find_morphism("1<2").unwrap();
        let p = pullback(&c, f, g).unwrap();
        assert_eq!(p.apex, 0);
    }
}
