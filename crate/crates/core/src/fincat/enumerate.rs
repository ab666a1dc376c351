//! Exhaustive enumeration of functors, natural transformations and monads.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::category::{FinCategory, MorId, ObjId};
use super::functor::{FinFunctor, FinNatTrans};
use super::monad::MonadData;
use crate::budget::{Budget, BudgetExceeded, NodeCounter};

/// Visits every element of the product of `candidates` in lexicographic
/// order. Stops early when `visit` returns `false`.
pub fn for_each_choice<T: Copy>(candidates: &[Vec<T>], visit: &mut dyn FnMut(&[T]) -> bool) {
    if candidates.iter().any(Vec::is_empty) {
        return;
    }
    let n = candidates.len();
    let mut idx = vec![0usize; n];
    let mut cur: Vec<T> = candidates.iter().map(|c| c[0]).collect();
    loop {
        if !visit(&cur) {
            return;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < candidates[i].len() {
                cur[i] = candidates[i][idx[i]];
                break;
            }
            idx[i] = 0;
            cur[i] = candidates[i][0];
        }
    }
}

/// All functors `c → d`, ordered by object table then morphism table.
pub fn functors(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    budget: &Budget,
) -> Result<Vec<FinFunctor>, BudgetExceeded> {
    let nm = c.n_morphisms();
    // composition constraints, checked once the largest id involved is assigned
    let mut constraints: Vec<Vec<(MorId, MorId, MorId)>> = vec![Vec::new(); nm];
    for f in c.morphisms() {
        for g in c.morphisms() {
            if let Some(h) = c.try_comp(g, f) {
                constraints[f.max(g).max(h)].push((g, f, h));
            }
        }
    }
    let mut counter = NodeCounter::new("functor search nodes", budget.max_search_nodes);
    let mut out = Vec::new();
    let mut obj = vec![0usize; c.n_objects()];
    let mut mor = vec![0usize; nm];
    let objs = vec![(0..d.n_objects()).collect::<Vec<_>>(); c.n_objects()];
    let mut err = None;
    for_each_choice(&objs, &mut |choice: &[ObjId]| {
        obj.copy_from_slice(choice);
        if let Err(e) = assign_morphisms(c, d, &obj, &mut mor, 0, &constraints, &mut counter, &mut |m| {
            if out.len() >= budget.max_results {
                return Err(BudgetExceeded::new("functors", budget.max_results, out.len() + 1));
            }
            out.push(FinFunctor::new_unchecked(c.clone(), d.clone(), obj.clone(), m.to_vec()));
            Ok(())
        }) {
            err = Some(e);
            return false;
        }
        true
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[allow(clippy::too_many_arguments)]
fn assign_morphisms(
    c: &FinCategory,
    d: &FinCategory,
    obj: &[ObjId],
    mor: &mut [MorId],
    k: usize,
    constraints: &[Vec<(MorId, MorId, MorId)>],
    counter: &mut NodeCounter,
    emit: &mut dyn FnMut(&[MorId]) -> Result<(), BudgetExceeded>,
) -> Result<(), BudgetExceeded> {
    if k == mor.len() {
        return emit(mor);
    }
    counter.tick()?;
    let (a, b) = (obj[c.src(k)], obj[c.dst(k)]);
    let forced = c.is_identity(k).then(|| d.id(a));
    let cands: &[MorId] = match &forced {
        Some(i) => core::slice::from_ref(i),
        None => d.hom(a, b),
    };
    for &m in cands {
        mor[k] = m;
        if constraints[k].iter().all(|&(g, f, h)| d.comp(mor[g], mor[f]) == mor[h]) {
            assign_morphisms(c, d, obj, mor, k + 1, constraints, counter, emit)?;
        }
    }
    Ok(())
}

/// All natural transformations `f ⇒ g` whose components pass `allow`.
pub fn nat_trans_filtered(
    f: &FinFunctor,
    g: &FinFunctor,
    budget: &Budget,
    allow: &dyn Fn(ObjId, MorId) -> bool,
) -> Result<Vec<FinNatTrans>, BudgetExceeded> {
    let c = f.source();
    let d = f.target();
    let n = c.n_objects();
    let cands: Vec<Vec<MorId>> = c
        .objects()
        .map(|o| d.hom(f.on_obj(o), g.on_obj(o)).iter().copied().filter(|&m| allow(o, m)).collect())
        .collect();
    // naturality for u: a → b is checked at max(a, b)
    let mut checks: Vec<Vec<MorId>> = vec![Vec::new(); n];
    for u in c.morphisms() {
        checks[c.src(u).max(c.dst(u))].push(u);
    }
    let mut counter = NodeCounter::new("natural transformation search nodes", budget.max_search_nodes);
    let mut out = Vec::new();
    let mut comp = vec![0usize; n];
    #[allow(clippy::too_many_arguments)]
    fn go(
        o: usize,
        comp: &mut Vec<MorId>,
        cands: &[Vec<MorId>],
        checks: &[Vec<MorId>],
        f: &FinFunctor,
        g: &FinFunctor,
        counter: &mut NodeCounter,
        out: &mut Vec<FinNatTrans>,
        limit: usize,
    ) -> Result<(), BudgetExceeded> {
        let c = f.source();
        let d = f.target();
        if o == comp.len() {
            if out.len() >= limit {
                return Err(BudgetExceeded::new("natural transformations", limit, out.len() + 1));
            }
            out.push(FinNatTrans::new_unchecked(f.clone(), g.clone(), comp.clone()));
            return Ok(());
        }
        counter.tick()?;
        for &m in &cands[o] {
            comp[o] = m;
            let ok = checks[o].iter().all(|&u| {
                let (a, b) = (c.src(u), c.dst(u));
                d.comp(g.on_mor(u), comp[a]) == d.comp(comp[b], f.on_mor(u))
            });
            if ok {
                go(o + 1, comp, cands, checks, f, g, counter, out, limit)?;
            }
        }
        Ok(())
    }
    go(0, &mut comp, &cands, &checks, f, g, &mut counter, &mut out, budget.max_results)?;
    Ok(out)
}

pub fn nat_trans(f: &FinFunctor, g: &FinFunctor, budget: &Budget) -> Result<Vec<FinNatTrans>, BudgetExceeded> {
    nat_trans_filtered(f, g, budget, &|_, _| true)
}

/// Every monad on `c`, ordered by functor, unit, multiplication.
pub fn monads(c: &Arc<FinCategory>, budget: &Budget) -> Result<Vec<MonadData>, BudgetExceeded> {
    let mut out = Vec::new();
    let id = FinFunctor::identity(c.clone());
    for t in functors(c, c, budget)? {
        let tt = t.then(&t).expect("endofunctor");
        for eta in nat_trans(&id, &t, budget)? {
            // unit laws pin μ on the images of η, so filter components early
            let allow = |b: ObjId, m: MorId| {
                let tb = t.on_obj(b);
                c.comp(m, eta.at(tb)) == c.id(tb) && c.comp(m, t.on_mor(eta.at(b))) == c.id(tb)
            };
            for mu in nat_trans_filtered(&tt, &t, budget, &allow)? {
                if let Ok(m) = MonadData::new(t.clone(), eta.clone(), mu) {
                    if out.len() >= budget.max_results {
                        return Err(BudgetExceeded::new("monads", budget.max_results, out.len() + 1));
                    }
                    out.push(m);
                }
            }
        }
    }
    Ok(out)
}

/// Every monad morphism `s → t`, by brute force over natural transformations.
pub fn monad_morphisms(s: &MonadData, t: &MonadData, budget: &Budget) -> Result<Vec<FinNatTrans>, BudgetExceeded> {
    Ok(nat_trans(s.functor(), t.functor(), budget)?
        .into_iter()
        .filter(|th| super::monad::check_monad_morphism(s, t, th))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;

    #[test]
    fn endofunctors_of_poset2_are_monotone_maps() {
        let c = Arc::new(presets::poset2());
        assert_eq!(functors(&c, &c, &Budget::default()).unwrap().len(), 3);
    }

    #[test]
    fn monads_on_poset2_are_closure_operators() {
        // inflationary idempotent monotone maps on 0 < 1: identity and const 1
        let c = Arc::new(presets::poset2());
        let ms = monads(&c, &Budget::default()).unwrap();
        assert_eq!(ms.len(), 2);
        assert!(ms.iter().all(MonadData::is_idempotent));
    }

    #[test]
    fn no_non_idempotent_monads_on_small_categories() {
        // mu_B splits, and mutual retracts in a finite category are isomorphic
        let mut raw = crate::fincat::RawCategory::with_objects(["x", "y"]);
        let r = raw.arrow("r", 1, 0);
        let s = raw.arrow("s", 0, 1);
        let e = raw.arrow("e", 1, 1);
        raw.compose(r, s, 0).compose(s, r, e).compose(e, e, e).compose(r, e, r).compose(e, s, s);
        let split = FinCategory::from_raw(&raw).unwrap();
        let cats = [
            split,
            presets::idempotent_monoid(),
            presets::parallel_pair(),
            presets::finset(&[0, 1]),
            presets::finset(&[0, 2]),
            presets::finset(&[1, 2]),
            presets::chain(3),
        ];
        for c in cats {
            let c = Arc::new(c);
            for m in monads(&c, &Budget::default()).unwrap() {
                assert!(m.is_idempotent());
                assert_eq!(m.idempotent_inverse_law(), Ok(()));
            }
        }
    }

    #[test]
    fn product_enumeration_order() {
        let mut seen = Vec::new();
        for_each_choice(&[vec![0, 1], vec![5, 6]], &mut |c: &[i32]| {
            seen.push((c[0], c[1]));
            true
        });
        assert_eq!(seen, vec![(0, 5), (0, 6), (1, 5), (1, 6)]);
    }
}
