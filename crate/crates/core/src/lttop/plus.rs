//! The plus construction `X⁺ = colim over covering sieves of Match(S, X)`
//! and sheafification as `X⁺⁺`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::sheaf::{family_of, matching_families, sieve_arrows};
use super::topology::LtTopology;
use crate::budget::{Budget, BudgetExceeded};
use crate::fincat::ObjId;
use crate::presheaf::omega::{maximal_sieve, pullback_sieve};
use crate::presheaf::{epi_mono_factorize, Elem, Presheaf, PresheafMap};

/// A matching family on a covering sieve.
pub type Germ = (crate::presheaf::Sieve, Vec<Elem>);

#[derive(Debug, Clone)]
pub struct PlusConstruction {
    pub object: Presheaf,
    /// `X → X⁺`, sending `x` to its family on the maximal sieve.
    pub unit: PresheafMap,
    /// The least germ of each class.
    pub reps: Vec<Vec<Germ>>,
    classes: Vec<BTreeMap<Germ, Elem>>,
}

impl PlusConstruction {
    /// Class of a germ at `c`.
    pub fn class_of(&self, c: ObjId, germ: &Germ) -> Option<Elem> {
        self.classes[c].get(germ).copied()
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn plus_construction(j: &LtTopology, x: &Presheaf, budget: &Budget) -> Result<PlusConstruction, BudgetExceeded> {
    let base = j.base().clone();
    let mut reps = Vec::with_capacity(base.n_objects());
    let mut classes = Vec::with_capacity(base.n_objects());
    let mut seen = 0usize;
    for c in base.objects() {
        let covering = j.covering_sieves(c);
        let mut items: Vec<Germ> = Vec::new();
        for &s in &covering {
            let fams = matching_families(x, c, s);
            seen += fams.len();
            items.extend(fams.into_iter().map(|fam| (s, fam)));
            if seen > budget.max_results {
                return Err(BudgetExceeded::new("plus construction germs", budget.max_results, seen));
            }
        }
        items.sort();
        let index: BTreeMap<&Germ, usize> = items.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut parent: Vec<usize> = (0..items.len()).collect();
        for (i, (s, fam)) in items.iter().enumerate() {
            let arrows = sieve_arrows(&base, c, *s);
            for &t in covering.iter().filter(|&&t| t != *s && t & !*s == 0) {
                let sub: Vec<Elem> =
                    arrows.iter().zip(fam).filter(|(&f, _)| t >> f & 1 == 1).map(|(_, &v)| v).collect();
                let k = index[&(t, sub)];
                let (a, b) = (find(&mut parent, i), find(&mut parent, k));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        // classes numbered by their least germ
        let mut class_of_root = BTreeMap::new();
        let mut col_reps = Vec::new();
        let mut lookup = BTreeMap::new();
        for (i, item) in items.iter().enumerate() {
            let r = find(&mut parent, i);
            let k = *class_of_root.entry(r).or_insert_with(|| {
                col_reps.push(item.clone());
                col_reps.len() - 1
            });
            lookup.insert(item.clone(), k);
        }
        reps.push(col_reps);
        classes.push(lookup);
    }
    let card: Vec<usize> = reps.iter().map(Vec::len).collect();
    let restrict: Vec<Vec<Elem>> = base
        .morphisms()
        .map(|g| {
            let (d, c) = (base.src(g), base.dst(g));
            reps[c]
                .iter()
                .map(|(s, fam)| {
                    let arrows = sieve_arrows(&base, c, *s);
                    let pulled = pullback_sieve(&base, g, *s);
                    let fam2: Vec<Elem> = sieve_arrows(&base, d, pulled)
                        .into_iter()
                        .map(|h| fam[arrows.binary_search(&base.comp(g, h)).expect("g∘h lies in S")])
                        .collect();
                    classes[d][&(pulled, fam2)]
                })
                .collect()
        })
        .collect();
    let object = Presheaf::new(base.clone(), card, restrict).expect("restriction of germs is functorial");
    let unit = PresheafMap::from_fn(x, |c, e| {
        let max = maximal_sieve(&base, c);
        classes[c][&(max, family_of(x, c, max, e))]
    });
    Ok(PlusConstruction { object, unit, reps, classes })
}

/// `f⁺: X⁺ → Y⁺`, pushing germs forward along `f`.
pub fn plus_map(f: &PresheafMap, px: &PlusConstruction, py: &PlusConstruction) -> PresheafMap {
    let base = px.object.base().clone();
    PresheafMap::from_fn(&px.object, |c, k| {
        let (s, fam) = &px.reps[c][k];
        let arrows = sieve_arrows(&base, c, *s);
        let pushed: Vec<Elem> = arrows.iter().zip(fam).map(|(&h, &v)| f.at(base.src(h), v)).collect();
        py.class_of(c, &(*s, pushed)).expect("pushforward of a matching family matches")
    })
}

/// `X⁺⁺` with the composite unit.
#[derive(Debug, Clone)]
pub struct Sheafification {
    pub object: Presheaf,
    pub unit: PresheafMap,
}

pub fn sheafify_oracle(j: &LtTopology, x: &Presheaf, budget: &Budget) -> Result<Sheafification, BudgetExceeded> {
    let first = plus_construction(j, x, budget)?;
    let second = plus_construction(j, &first.object, budget)?;
    Ok(Sheafification { object: second.object.clone(), unit: first.unit.then(&second.unit) })
}

/// The separated reflection, as the image of `X → X⁺`.
pub fn separated_quotient(
    j: &LtTopology,
    x: &Presheaf,
    budget: &Budget,
) -> Result<(Presheaf, PresheafMap), BudgetExceeded> {
    let p = plus_construction(j, x, budget)?;
    let im = epi_mono_factorize(x, &p.object, &p.unit);
    Ok((im.object, im.epi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use crate::lttop::{enumerate_lt_topologies, is_separated, is_sheaf};
    use crate::presheaf::{enumerate_presheaves, find_iso, HomSearch, Omega};
    use alloc::sync::Arc;

    #[test]
    fn plus_plus_is_a_sheaf_and_plus_is_separated() {
        let b = Budget::default();
        for c in [presets::terminal(), presets::poset2(), presets::chain(3), presets::parallel_pair()] {
            let base = Arc::new(c);
            let om = Arc::new(Omega::new(base.clone()).unwrap());
            let xs = enumerate_presheaves(&base, 2, &b).unwrap();
            for j in enumerate_lt_topologies(&om, &b).unwrap() {
                for x in &xs {
                    let p = plus_construction(&j, x, &b).unwrap();
                    assert!(is_separated(&j, &p.object));
                    let a = sheafify_oracle(&j, x, &b).unwrap();
                    assert!(is_sheaf(&j, &a.object));
                    a.unit.check(x, &a.object).unwrap();
                    if is_sheaf(&j, x) {
                        assert!(a.unit.is_iso(&a.object));
                    }
                    let (q, e) = separated_quotient(&j, x, &b).unwrap();
                    assert!(is_separated(&j, &q));
                    assert!(e.is_epi(&q));
                }
            }
        }
    }

    #[test]
    fn identity_topology_plus_is_identity() {
        let b = Budget::default();
        let base = Arc::new(presets::chain(3));
        let j = LtTopology::identity(Arc::new(Omega::new(base.clone()).unwrap()));
        for x in enumerate_presheaves(&base, 2, &b).unwrap() {
            let p = plus_construction(&j, &x, &b).unwrap();
            assert!(p.unit.is_iso(&p.object));
        }
    }

    #[test]
    fn plus_map_is_natural_and_functorial() {
        let b = Budget::default();
        let base = Arc::new(presets::parallel_pair());
        let om = Arc::new(Omega::new(base.clone()).unwrap());
        let xs = enumerate_presheaves(&base, 2, &b).unwrap();
        for j in enumerate_lt_topologies(&om, &b).unwrap() {
            let ps: Vec<_> = xs.iter().map(|x| plus_construction(&j, x, &b).unwrap()).collect();
            for (i, x) in xs.iter().enumerate() {
                for (k, y) in xs.iter().enumerate() {
                    for f in HomSearch::new(x, y).collect(usize::MAX).unwrap() {
                        let pf = plus_map(&f, &ps[i], &ps[k]);
                        pf.check(&ps[i].object, &ps[k].object).unwrap();
                        assert_eq!(ps[i].unit.then(&pf), f.then(&ps[k].unit));
                    }
                }
                let id = PresheafMap::identity(x);
                assert_eq!(plus_map(&id, &ps[i], &ps[i]), PresheafMap::identity(&ps[i].object));
            }
        }
    }

    #[test]
    fn everything_covers_sheafifies_to_terminal() {
        let b = Budget::default();
        let base = Arc::new(presets::poset2());
        let j = LtTopology::everything(Arc::new(Omega::new(base.clone()).unwrap()));
        for x in enumerate_presheaves(&base, 2, &b).unwrap() {
            let a = sheafify_oracle(&j, &x, &b).unwrap();
            assert!(find_iso(&a.object, &Presheaf::terminal(base.clone()), &b).unwrap().is_some());
        }
    }
}
