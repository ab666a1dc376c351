//! Orthogonality in a presheaf topos, ordinary and enriched over the topos.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;

use crate::budget::{Budget, BudgetExceeded};
use crate::presheaf::{exponential, hom_set, precompose, product, product_map, Exponential, Presheaf, PresheafMap};

/// A map between two given presheaves.
#[derive(Debug, Clone, Copy)]
pub struct Arrow<'a> {
    pub src: &'a Presheaf,
    pub dst: &'a Presheaf,
    pub map: &'a PresheafMap,
}

impl<'a> Arrow<'a> {
    pub fn new(src: &'a Presheaf, dst: &'a Presheaf, map: &'a PresheafMap) -> Self {
        Arrow { src, dst, map }
    }
}

/// `e ↓ m` in the underlying category: `d ↦ (d∘e, m∘d)` is a bijection from
/// `hom(A2, B1)` onto the commuting squares.
pub fn presheaf_orthogonal(e: Arrow, m: Arrow, budget: &Budget) -> Result<bool, BudgetExceeded> {
    let us = hom_set(e.src, m.src, budget)?;
    let vs = hom_set(e.dst, m.dst, budget)?;
    let mut squares = 0usize;
    for u in &us {
        let mu = u.then(m.map);
        for v in &vs {
            if e.map.then(v) == mu {
                squares += 1;
            }
        }
    }
    let ds = hom_set(e.dst, m.src, budget)?;
    if ds.len() != squares {
        return Ok(false);
    }
    let images: BTreeSet<(PresheafMap, PresheafMap)> = ds.iter().map(|d| (e.map.then(d), d.then(m.map))).collect();
    Ok(images.len() == squares)
}

/// `f ⊥ B` in the underlying category.
pub fn presheaf_object_orthogonal(f: Arrow, b: &Presheaf, budget: &Budget) -> Result<bool, BudgetExceeded> {
    let source = hom_set(f.dst, b, budget)?;
    let target = hom_set(f.src, b, budget)?;
    if source.len() != target.len() {
        return Ok(false);
    }
    let images: BTreeSet<PresheafMap> = source.iter().map(|g| f.map.then(g)).collect();
    Ok(images.len() == target.len())
}

/// `B^f: B^{A2} → B^{A1}` is an isomorphism of presheaves.
pub fn enriched_object_orthogonal(f: Arrow, b: &Presheaf, budget: &Budget) -> Result<bool, BudgetExceeded> {
    let exp2 = exponential(f.dst, b, budget)?;
    let exp1 = exponential(f.src, b, budget)?;
    if exp1.object.cards() != exp2.object.cards() {
        return Ok(false);
    }
    let bf = precompose(&exp2, &exp1, f.src, f.dst, f.map);
    Ok(bf.is_iso(&exp1.object))
}

/// `e ↓ m` enriched: the square of exponentials
/// `B1^{A2} → B2^{A2} ×_{B2^{A1}} B1^{A1}` is a pullback, checked as a
/// pointwise bijection onto the fibre product.
pub fn enriched_orthogonal(e: Arrow, m: Arrow, budget: &Budget) -> Result<bool, BudgetExceeded> {
    let b1a2 = exponential(e.dst, m.src, budget)?;
    let b1a1 = exponential(e.src, m.src, budget)?;
    let b2a2 = exponential(e.dst, m.dst, budget)?;
    let b2a1 = exponential(e.src, m.dst, budget)?;
    let pre_top = precompose(&b1a2, &b1a1, e.src, e.dst, e.map);
    let pre_bottom = precompose(&b2a2, &b2a1, e.src, e.dst, e.map);
    let post_left = postcompose(&b1a2, &b2a2, m.map);
    let post_right = postcompose(&b1a1, &b2a1, m.map);
    let base = e.src.base();
    for c in base.objects() {
        let fibre: usize = (0..b2a2.object.card(c))
            .map(|v| (0..b1a1.object.card(c)).filter(|&u| pre_bottom.at(c, v) == post_right.at(c, u)).count())
            .sum();
        if fibre != b1a2.object.card(c) {
            return Ok(false);
        }
        let pairs: BTreeSet<(usize, usize)> =
            (0..b1a2.object.card(c)).map(|d| (post_left.at(c, d), pre_top.at(c, d))).collect();
        if pairs.len() != fibre {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m^A: B1^A → B2^A`, postcomposition with `m`.
fn postcompose(exp1: &Exponential, exp2: &Exponential, m: &PresheafMap) -> PresheafMap {
    PresheafMap::from_fn(&exp1.object, |c, i| {
        let alpha = exp1.maps[c][i].then(m);
        exp2.index_of(c, &alpha).expect("postcomposite is natural")
    })
}

/// `e ↓ m` via ordinary orthogonality of `y(c) × e` against `m` for every
/// base object `c`.
pub fn tensored_orthogonal(e: Arrow, m: Arrow, budget: &Budget) -> Result<bool, BudgetExceeded> {
    let base: &Arc<_> = e.src.base();
    for c in base.objects() {
        let yc = Presheaf::representable(base.clone(), c);
        let p1 = product(&yc, e.src);
        let p2 = product(&yc, e.dst);
        let ye = product_map(&PresheafMap::identity(&yc), e.map, e.src, e.dst);
        if !presheaf_orthogonal(Arrow::new(&p1.object, &p2.object, &ye), m, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use crate::presheaf::to_terminal;
    use alloc::vec;

    fn sets() -> (Presheaf, Presheaf, PresheafMap, PresheafMap) {
        let base = Arc::new(presets::terminal());
        let two = Presheaf::new(base.clone(), vec![2], vec![vec![0, 1]]).unwrap();
        let one = Presheaf::terminal(base);
        let collapse = to_terminal(&two);
        let pick = PresheafMap { comp: vec![vec![0]] };
        (two, one, collapse, pick)
    }

    #[test]
    fn surjection_against_injection() {
        let (two, one, collapse, pick) = sets();
        let e = Arrow::new(&two, &one, &collapse);
        let m = Arrow::new(&one, &two, &pick);
        let b = Budget::default();
        assert!(presheaf_orthogonal(e, m, &b).unwrap());
        assert!(enriched_orthogonal(e, m, &b).unwrap());
        assert!(tensored_orthogonal(e, m, &b).unwrap());
        // but not the other way round
        assert!(!presheaf_orthogonal(m, e, &b).unwrap());
    }

    #[test]
    fn collapse_orthogonal_to_point_only() {
        let (two, one, collapse, _) = sets();
        let e = Arrow::new(&two, &one, &collapse);
        let b = Budget::default();
        assert!(presheaf_object_orthogonal(e, &one, &b).unwrap());
        assert!(!presheaf_object_orthogonal(e, &two, &b).unwrap());
        assert!(enriched_object_orthogonal(e, &one, &b).unwrap());
        assert!(!enriched_object_orthogonal(e, &two, &b).unwrap());
    }

    #[test]
    fn iso_is_orthogonal_to_all() {
        let (two, one, collapse, _) = sets();
        let swap = PresheafMap { comp: vec![vec![1, 0]] };
        let e = Arrow::new(&two, &two, &swap);
        let m = Arrow::new(&two, &one, &collapse);
        assert!(enriched_orthogonal(e, m, &Budget::default()).unwrap());
    }
}
