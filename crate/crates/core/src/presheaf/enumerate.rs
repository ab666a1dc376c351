//! Presheaves up to isomorphism and subpresheaf lattices.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::core::{Elem, Presheaf, Subpresheaf};
use crate::budget::{Budget, BudgetExceeded, NodeCounter};
use crate::fincat::{for_each_choice, FinCategory, MorId};

/// Every function `0..n → 0..m` as a table, in lexicographic order.
fn all_tables(n: usize, m: usize) -> Vec<Vec<Elem>> {
    let cands = vec![(0..m).collect::<Vec<_>>(); n];
    let mut out = Vec::new();
    for_each_choice(&cands, &mut |t: &[Elem]| {
        out.push(t.to_vec());
        true
    });
    out
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Restriction tables after relabeling each carrier by `perm[c]`
/// (`perm[c][old] = new`).
fn relabel(base: &FinCategory, restrict: &[Vec<Elem>], perm: &[&Vec<usize>]) -> Vec<Vec<Elem>> {
    base.morphisms()
        .map(|f| {
            let (s, d) = (base.src(f), base.dst(f));
            let old = &restrict[f];
            let mut t = vec![0; old.len()];
            for (x, &y) in old.iter().enumerate() {
                t[perm[d][x]] = perm[s][y];
            }
            t
        })
        .collect()
}

/// Whether no relabeling gives a lexicographically smaller table list.
fn is_canonical(
    base: &FinCategory,
    restrict: &[Vec<Elem>],
    perms: &[&Vec<Vec<usize>>],
    counter: &mut NodeCounter,
) -> Result<bool, BudgetExceeded> {
    let choices: Vec<Vec<usize>> = perms.iter().map(|p| (0..p.len()).collect()).collect();
    let mut minimal = true;
    let mut err = None;
    for_each_choice(&choices, &mut |pick: &[usize]| {
        if let Err(e) = counter.tick() {
            err = Some(e);
            return false;
        }
        let perm: Vec<&Vec<usize>> = pick.iter().zip(perms).map(|(&i, p)| &p[i]).collect();
        if relabel(base, restrict, &perm).as_slice() < restrict {
            minimal = false;
            return false;
        }
        true
    });
    match err {
        Some(e) => Err(e),
        None => Ok(minimal),
    }
}

/// The least relabeling of `x`'s tables, which is a complete isomorphism
/// invariant for presheaves with the same carrier sizes.
pub fn canonical_form(x: &Presheaf) -> Presheaf {
    let base = x.base();
    let perm_sets: Vec<Vec<Vec<usize>>> = x.cards().iter().map(|&n| permutations(n)).collect();
    let choices: Vec<Vec<usize>> = perm_sets.iter().map(|p| (0..p.len()).collect()).collect();
    let mut best: Vec<Vec<Elem>> = x.tables().to_vec();
    for_each_choice(&choices, &mut |pick: &[usize]| {
        let perm: Vec<&Vec<usize>> = pick.iter().zip(&perm_sets).map(|(&i, p)| &p[i]).collect();
        let t = relabel(base, x.tables(), &perm);
        if t < best {
            best = t;
        }
        true
    });
    Presheaf::new_unchecked(base.clone(), x.cards().to_vec(), best)
}

type TableVisitor<'a> = dyn FnMut(&[Vec<Elem>]) -> Result<bool, BudgetExceeded> + 'a;

/// Visits every presheaf on `base` with carrier sizes `card`, as raw
/// restriction tables. Stops when `visit` returns `false`.
fn for_each_table(
    base: &FinCategory,
    card: &[usize],
    counter: &mut NodeCounter,
    visit: &mut TableVisitor,
) -> Result<(), BudgetExceeded> {
    let free: Vec<MorId> = base.morphisms().filter(|&f| !base.is_identity(f)).collect();
    let mut slot = vec![usize::MAX; base.n_morphisms()];
    for (i, &f) in free.iter().enumerate() {
        slot[f] = i;
    }
    // X(g∘f) = X(f)∘X(g), checked once all non-identity ids are assigned
    let mut checks: Vec<Vec<(MorId, MorId, MorId)>> = vec![Vec::new(); free.len()];
    for &f in &free {
        for &g in &free {
            if let Some(h) = base.try_comp(g, f) {
                let at = [f, g, h].iter().filter(|&&m| !base.is_identity(m)).map(|&m| slot[m]).max().unwrap();
                checks[at].push((g, f, h));
            }
        }
    }
    let options: Vec<Vec<Vec<Elem>>> = free.iter().map(|&f| all_tables(card[base.dst(f)], card[base.src(f)])).collect();
    let mut restrict: Vec<Vec<Elem>> = base
        .morphisms()
        .map(|f| if base.is_identity(f) { (0..card[base.dst(f)]).collect() } else { Vec::new() })
        .collect();
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        base: &FinCategory,
        card: &[usize],
        free: &[MorId],
        options: &[Vec<Vec<Elem>>],
        checks: &[Vec<(MorId, MorId, MorId)>],
        restrict: &mut Vec<Vec<Elem>>,
        counter: &mut NodeCounter,
        visit: &mut TableVisitor,
    ) -> Result<bool, BudgetExceeded> {
        if k == free.len() {
            return visit(restrict);
        }
        counter.tick()?;
        for t in &options[k] {
            restrict[free[k]] = t.clone();
            let ok = checks[k]
                .iter()
                .all(|&(g, f, h)| (0..card[base.dst(g)]).all(|x| restrict[h][x] == restrict[f][restrict[g][x]]));
            if ok && !go(k + 1, base, card, free, options, checks, restrict, counter, visit)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
    go(0, base, card, &free, &options, &checks, &mut restrict, counter, visit)?;
    Ok(())
}

/// One representative per isomorphism class of presheaves with every carrier
/// of size at most `bound`, each in canonical form. Sorted by carrier sizes,
/// then tables.
pub fn enumerate_presheaves(
    base: &Arc<FinCategory>,
    bound: usize,
    budget: &Budget,
) -> Result<Vec<Presheaf>, BudgetExceeded> {
    if bound > budget.max_carrier {
        return Err(BudgetExceeded::new("carrier bound", budget.max_carrier, bound));
    }
    if base.n_objects() > budget.max_base_objects || base.n_morphisms() > budget.max_base_morphisms {
        return Err(BudgetExceeded::new("base morphisms", budget.max_base_morphisms, base.n_morphisms()));
    }
    let perms: Vec<Vec<Vec<usize>>> = (0..=bound).map(permutations).collect();
    let sizes = vec![(0..=bound).collect::<Vec<_>>(); base.n_objects()];
    let mut counter = NodeCounter::new("presheaf enumeration nodes", budget.max_search_nodes);
    let mut out = Vec::new();
    let mut err = None;
    for_each_choice(&sizes, &mut |card: &[usize]| {
        let ps: Vec<&Vec<Vec<usize>>> = card.iter().map(|&n| &perms[n]).collect();
        let res = for_each_table(base, card, &mut counter.clone(), &mut |restrict| {
            if is_canonical(base, restrict, &ps, &mut counter)? {
                if out.len() >= budget.max_results {
                    return Err(BudgetExceeded::new("presheaves", budget.max_results, out.len() + 1));
                }
                out.push(Presheaf::new_unchecked(base.clone(), card.to_vec(), restrict.to_vec()));
            }
            Ok(true)
        });
        if let Err(e) = res {
            err = Some(e);
            return false;
        }
        true
    });
    if let Some(e) = err {
        return Err(e);
    }
    out.sort_by(|a, b| (a.cards(), a.tables()).cmp(&(b.cards(), b.tables())));
    Ok(out)
}

/// Every presheaf with the given carrier sizes, not quotiented.
pub fn all_presheaves_with_cards(
    base: &Arc<FinCategory>,
    card: &[usize],
    budget: &Budget,
) -> Result<Vec<Presheaf>, BudgetExceeded> {
    let mut counter = NodeCounter::new("presheaf enumeration nodes", budget.max_search_nodes);
    let mut out = Vec::new();
    for_each_table(base, card, &mut counter, &mut |restrict| {
        out.push(Presheaf::new_unchecked(base.clone(), card.to_vec(), restrict.to_vec()));
        Ok(true)
    })?;
    Ok(out)
}

/// Every subpresheaf of `x`, sorted.
pub fn subpresheaves(x: &Presheaf, budget: &Budget) -> Result<Vec<Subpresheaf>, BudgetExceeded> {
    let base = x.base();
    let elems: Vec<(usize, Elem)> = base.objects().flat_map(|c| (0..x.card(c)).map(move |e| (c, e))).collect();
    let down: Vec<Subpresheaf> = elems.iter().map(|&p| Subpresheaf::generated_by(x, &[p])).collect();
    let mut seen: BTreeSet<Subpresheaf> = BTreeSet::new();
    let mut frontier = vec![Subpresheaf::empty(x)];
    seen.insert(frontier[0].clone());
    while let Some(s) = frontier.pop() {
        for (i, &(c, e)) in elems.iter().enumerate() {
            if s.contains(c, e) {
                continue;
            }
            let t = s.join(&down[i]);
            if !seen.contains(&t) {
                if seen.len() >= budget.max_results {
                    return Err(BudgetExceeded::new("subpresheaves", budget.max_results, seen.len() + 1));
                }
                seen.insert(t.clone());
                frontier.push(t);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use crate::presheaf::search::find_iso;

    fn brute_force_classes(base: &Arc<FinCategory>, bound: usize) -> usize {
        let sizes = vec![(0..=bound).collect::<Vec<_>>(); base.n_objects()];
        let mut reps: Vec<Presheaf> = Vec::new();
        for_each_choice(&sizes, &mut |card: &[usize]| {
            for x in all_presheaves_with_cards(base, card, &Budget::default()).unwrap() {
                if !reps.iter().any(|r| find_iso(r, &x, &Budget::default()).unwrap().is_some()) {
                    reps.push(x);
                }
            }
            true
        });
        reps.len()
    }

    #[test]
    fn terminal_base_counts() {
        let base = Arc::new(presets::terminal());
        assert_eq!(enumerate_presheaves(&base, 1, &Budget::default()).unwrap().len(), 2);
        assert_eq!(enumerate_presheaves(&base, 2, &Budget::default()).unwrap().len(), 3);
    }

    #[test]
    fn poset2_classes_match_iso_quotient() {
        let base = Arc::new(presets::poset2());
        let n = enumerate_presheaves(&base, 2, &Budget::default()).unwrap().len();
        assert_eq!(n, brute_force_classes(&base, 2));
    }

    #[test]
    fn parallel_pair_classes_match_iso_quotient() {
        let base = Arc::new(presets::parallel_pair());
        let n = enumerate_presheaves(&base, 2, &Budget::default()).unwrap().len();
        assert_eq!(n, brute_force_classes(&base, 2));
    }

    #[test]
    fn canonical_form_is_invariant() {
        let base = Arc::new(presets::poset2());
        let a = Presheaf::new(base.clone(), vec![2, 2], vec![vec![0, 1], vec![0, 1], vec![1, 1]]).unwrap();
        let b = Presheaf::new(base, vec![2, 2], vec![vec![0, 1], vec![0, 1], vec![0, 0]]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn subobjects_of_representable_are_sieves() {
        let base = Arc::new(presets::chain(3));
        let y = Presheaf::representable(base.clone(), 2);
        let subs = subpresheaves(&y, &Budget::default()).unwrap();
        // sieves on the top of a 3-chain: down-sets of {0, 1, 2}
        assert_eq!(subs.len(), 4);
        assert!(subs.iter().all(|s| s.is_closed(&y)));
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(3).len(), 6);
    }
}
