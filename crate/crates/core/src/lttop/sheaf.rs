//! Matching families, separated presheaves and sheaves.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::topology::LtTopology;
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::presheaf::{Elem, Presheaf, Sieve};

/// Arrows of a sieve, ascending.
pub fn sieve_arrows(base: &FinCategory, c: ObjId, s: Sieve) -> Vec<MorId> {
    base.arrows_into(c).filter(|&f| s >> f & 1 == 1).collect()
}

/// Every matching family for `X` on the sieve `s` on `c`: a value
/// `x_f ∈ X(dom f)` for each arrow of `s` (in ascending order) with
/// `X(g) x_f = x_{f∘g}`.
pub fn matching_families(x: &Presheaf, c: ObjId, s: Sieve) -> Vec<Vec<Elem>> {
    let base = x.base();
    let arrows = sieve_arrows(base, c, s);
    let pos = |f: MorId| arrows.iter().position(|&a| a == f).expect("sieves are closed under precomposition");
    // (i, g, k): X(g) x_i = x_k, checked once both are assigned
    let mut checks: Vec<Vec<(usize, MorId, usize)>> = vec![Vec::new(); arrows.len()];
    for (i, &f) in arrows.iter().enumerate() {
        for g in base.arrows_into(base.src(f)) {
            let k = pos(base.comp(f, g));
            checks[i.max(k)].push((i, g, k));
        }
    }
    let mut out = Vec::new();
    let mut assign = vec![0; arrows.len()];
    fn go(
        t: usize,
        x: &Presheaf,
        base: &FinCategory,
        arrows: &[MorId],
        checks: &[Vec<(usize, MorId, usize)>],
        assign: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        if t == arrows.len() {
            out.push(assign.clone());
            return;
        }
        for v in 0..x.card(base.src(arrows[t])) {
            assign[t] = v;
            if checks[t].iter().all(|&(i, g, k)| x.res(g, assign[i]) == assign[k]) {
                go(t + 1, x, base, arrows, checks, assign, out);
            }
        }
    }
    go(0, x, base, &arrows, &checks, &mut assign, &mut out);
    out
}

/// `(X(f) e)_f` over the arrows of `s`.
pub fn family_of(x: &Presheaf, c: ObjId, s: Sieve, e: Elem) -> Vec<Elem> {
    sieve_arrows(x.base(), c, s).into_iter().map(|f| x.res(f, e)).collect()
}

/// Why `X` fails to be separated or a sheaf.
pub fn sheaf_failure(j: &LtTopology, x: &Presheaf, require_sheaf: bool) -> Option<String> {
    let base = j.base();
    for c in base.objects() {
        for s in j.covering_sieves(c) {
            let restricted: BTreeSet<Vec<Elem>> = (0..x.card(c)).map(|e| family_of(x, c, s, e)).collect();
            if restricted.len() != x.card(c) {
                return Some(format!("two elements at object {c} agree on covering sieve {s:#b}"));
            }
            if require_sheaf {
                let n = matching_families(x, c, s).len();
                if n != x.card(c) {
                    return Some(format!(
                        "covering sieve {s:#b} on object {c} has {n} matching families for {} elements",
                        x.card(c)
                    ));
                }
            }
        }
    }
    None
}

pub fn is_separated(j: &LtTopology, x: &Presheaf) -> bool {
    sheaf_failure(j, x, false).is_none()
}

pub fn is_sheaf(j: &LtTopology, x: &Presheaf) -> bool {
    sheaf_failure(j, x, true).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::fincat::presets;
    use crate::presheaf::{enumerate_presheaves, Omega};
    use alloc::sync::Arc;

    #[test]
    fn maximal_sieve_families_are_elements() {
        let base = Arc::new(presets::chain(3));
        for x in enumerate_presheaves(&base, 2, &Budget::default()).unwrap() {
            for c in 0..3 {
                let max = crate::presheaf::omega::maximal_sieve(&base, c);
                let fams = matching_families(&x, c, max);
                assert_eq!(fams.len(), x.card(c));
                for e in 0..x.card(c) {
                    assert!(fams.contains(&family_of(&x, c, max, e)));
                }
            }
        }
    }

    #[test]
    fn identity_topology_everything_is_a_sheaf() {
        let base = Arc::new(presets::parallel_pair());
        let j = LtTopology::identity(Arc::new(Omega::new(base.clone()).unwrap()));
        for x in enumerate_presheaves(&base, 2, &Budget::default()).unwrap() {
            assert!(is_sheaf(&j, &x));
        }
    }

    #[test]
    fn everything_covers_sheaves_are_terminal() {
        let base = Arc::new(presets::poset2());
        let j = LtTopology::everything(Arc::new(Omega::new(base.clone()).unwrap()));
        for x in enumerate_presheaves(&base, 3, &Budget::default()).unwrap() {
            assert_eq!(is_sheaf(&j, &x), x.cards().iter().all(|&n| n == 1));
            assert_eq!(is_separated(&j, &x), x.cards().iter().all(|&n| n <= 1));
        }
    }
}
