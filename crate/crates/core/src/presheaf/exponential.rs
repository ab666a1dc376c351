//! Exponentials `Y^X` with `(Y^X)(c) = hom(y(c) × X, Y)`.

use alloc::vec::Vec;

use super::core::{product, Elem, Presheaf, PresheafMap, Product};
use super::search::HomSearch;
use crate::budget::{Budget, BudgetExceeded};
use crate::fincat::ObjId;

#[derive(Debug, Clone)]
pub struct Exponential {
    pub object: Presheaf,
    /// `maps[c][i]` is element `i` of `(Y^X)(c)`, a map `y(c) × X → Y`;
    /// each list is sorted.
    pub maps: Vec<Vec<PresheafMap>>,
    /// `y(c) × X` for every `c`; the pair `(f, x)` at `d` has index
    /// `hom_pos(f) * |X(d)| + x`.
    pub domains: Vec<Product>,
}

impl Exponential {
    pub fn index_of(&self, c: ObjId, alpha: &PresheafMap) -> Option<Elem> {
        self.maps[c].binary_search(alpha).ok()
    }

    /// `ev(α, x) = α(id_c, x)`.
    pub fn eval(&self, x: &Presheaf, c: ObjId, alpha: Elem, e: Elem) -> Elem {
        let base = x.base();
        self.maps[c][alpha].at(c, base.hom_pos(base.id(c)) * x.card(c) + e)
    }
}

/// Builds `Y^X`. Each carrier is limited to `budget.max_exponential`.
pub fn exponential(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<Exponential, BudgetExceeded> {
    let base = x.base().clone();
    let mut maps = Vec::with_capacity(base.n_objects());
    let mut domains = Vec::with_capacity(base.n_objects());
    for c in base.objects() {
        let yc = Presheaf::representable(base.clone(), c);
        let dom = product(&yc, x);
        let hs = HomSearch::new(&dom.object, y).budget(budget).collect(budget.max_exponential)?;
        maps.push(hs);
        domains.push(dom);
    }
    let card: Vec<usize> = maps.iter().map(Vec::len).collect();
    let restrict = base
        .morphisms()
        .map(|g| {
            let (s, d) = (base.src(g), base.dst(g));
            maps[d]
                .iter()
                .map(|alpha| {
                    let restricted = PresheafMap::from_fn(&domains[s].object, |e, p| {
                        let nx = x.card(e);
                        let f2 = base.hom(e, s)[p / nx];
                        alpha.at(e, base.hom_pos(base.comp(g, f2)) * nx + p % nx)
                    });
                    maps[s].binary_search(&restricted).expect("restriction of a natural map is natural")
                })
                .collect()
        })
        .collect();
    let object = Presheaf::new_unchecked(base, card, restrict);
    Ok(Exponential { object, maps, domains })
}

/// Evaluation `Y^X × X → Y` as a map out of the given product.
pub fn evaluation(exp: &Exponential, x: &Presheaf, prod: &Product) -> PresheafMap {
    PresheafMap::from_fn(&prod.object, |c, p| {
        let nx = x.card(c);
        exp.eval(x, c, p / nx, p % nx)
    })
}

/// `Y^h: Y^B → Y^A` for `h: A → B`, precomposition with `y(c) × h`.
pub fn precompose(
    exp_b: &Exponential,
    exp_a: &Exponential,
    a: &Presheaf,
    b: &Presheaf,
    h: &PresheafMap,
) -> PresheafMap {
    PresheafMap::from_fn(&exp_b.object, |c, i| {
        let alpha = &exp_b.maps[c][i];
        let pulled = PresheafMap::from_fn(&exp_a.domains[c].object, |e, p| {
            let na = a.card(e);
            alpha.at(e, (p / na) * b.card(e) + h.at(e, p % na))
        });
        exp_a.index_of(c, &pulled).expect("precomposite is natural")
    })
}

/// Transpose of `phi: Z × X → Y` into `Z → Y^X`.
pub fn curry(z: &Presheaf, x: &Presheaf, exp: &Exponential, phi: &PresheafMap) -> PresheafMap {
    let base = x.base();
    PresheafMap::from_fn(z, |c, w| {
        let alpha = PresheafMap::from_fn(&exp.domains[c].object, |d, p| {
            let nx = x.card(d);
            let f = base.hom(d, c)[p / nx];
            phi.at(d, z.res(f, w) * nx + p % nx)
        });
        exp.index_of(c, &alpha).expect("curried map is natural")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use crate::presheaf::search::hom_set;
    use alloc::sync::Arc;
    use alloc::vec;

    #[test]
    fn finite_set_exponent() {
        let base = Arc::new(presets::terminal());
        let x = Presheaf::new(base.clone(), vec![3], vec![vec![0, 1, 2]]).unwrap();
        let y = Presheaf::new(base, vec![2], vec![vec![0, 1]]).unwrap();
        let e = exponential(&x, &y, &Budget::default()).unwrap();
        assert_eq!(e.object.cards(), &[8]);
    }

    #[test]
    fn exponent_of_terminal_is_base() {
        let base = Arc::new(presets::poset2());
        let y =
            Presheaf::from_fn(base.clone(), vec![2, 3], |f, x| if base.is_identity(f) { x } else { x % 2 }).unwrap();
        let one = Presheaf::terminal(base);
        let e = exponential(&one, &y, &Budget::default()).unwrap();
        assert_eq!(e.object.cards(), y.cards());
    }

    #[test]
    fn currying_is_a_bijection() {
        let base = Arc::new(presets::poset2());
        let x = Presheaf::from_fn(base.clone(), vec![1, 2], |f, e| if base.is_identity(f) { e } else { 0 }).unwrap();
        let y = Presheaf::from_fn(base.clone(), vec![2, 2], |_, e| e).unwrap();
        let z = Presheaf::representable(base.clone(), 1);
        let exp = exponential(&x, &y, &Budget::default()).unwrap();
        let zx = product(&z, &x);
        let left = hom_set(&zx.object, &y, &Budget::default()).unwrap();
        let right = hom_set(&z, &exp.object, &Budget::default()).unwrap();
        assert_eq!(left.len(), right.len());
        let mut curried: Vec<PresheafMap> = left.iter().map(|phi| curry(&z, &x, &exp, phi)).collect();
        curried.sort();
        curried.dedup();
        assert_eq!(curried, right);
    }
}
