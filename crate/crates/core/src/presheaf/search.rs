//! Backtracking enumeration of natural transformations.
//!
//! Variables are the elements `(c, x)` of the domain. A restriction
//! `X(f)(u) = w` forces `α(w) = Y(f)(α(u))`; it is checked as soon as the later
//! of its two variables is assigned, and it fixes the value outright when `w`
//! comes later.

use alloc::vec;
use alloc::vec::Vec;

use super::core::{Elem, Presheaf, PresheafMap};
use crate::budget::{Budget, BudgetExceeded, NodeCounter};
use crate::fincat::{FinCategory, MorId, ObjId};

/// Objects ordered so that codomains of non-invertible morphisms come first.
pub(crate) fn object_order(base: &FinCategory) -> Vec<ObjId> {
    let reach: Vec<usize> =
        base.objects().map(|c| base.objects().filter(|&d| !base.hom(c, d).is_empty()).count()).collect();
    let mut order: Vec<ObjId> = base.objects().collect();
    order.sort_by_key(|&c| (reach[c], c));
    order
}

#[derive(Clone, Copy)]
enum Rule {
    /// Value must equal `Y(mor)(α(other))`.
    Forced { other: usize, mor: MorId },
    /// `Y(mor)(value)` must equal `α(other)`.
    Filter { other: usize, mor: MorId },
}

pub struct HomSearch<'a> {
    x: &'a Presheaf,
    y: &'a Presheaf,
    domains: Vec<Option<Vec<Elem>>>,
    injective: bool,
    node_limit: u64,
}

impl<'a> HomSearch<'a> {
    pub fn new(x: &'a Presheaf, y: &'a Presheaf) -> Self {
        HomSearch {
            x,
            y,
            domains: vec![None; x.total()],
            injective: false,
            node_limit: Budget::default().max_search_nodes,
        }
    }

    fn var(&self, c: ObjId, e: Elem) -> usize {
        self.x.cards()[..c].iter().sum::<usize>() + e
    }

    /// Restricts the value of `(c, e)` to `values`.
    pub fn restrict(mut self, c: ObjId, e: Elem, values: Vec<Elem>) -> Self {
        let v = self.var(c, e);
        self.domains[v] = Some(values);
        self
    }

    pub fn fix(self, c: ObjId, e: Elem, value: Elem) -> Self {
        self.restrict(c, e, vec![value])
    }

    /// Only pointwise injective maps.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn budget(mut self, budget: &Budget) -> Self {
        self.node_limit = budget.max_search_nodes;
        self
    }

    /// Visits every matching map; stops when `visit` returns `false`.
    pub fn run(&self, visit: &mut dyn FnMut(&PresheafMap) -> bool) -> Result<(), BudgetExceeded> {
        let (x, y) = (self.x, self.y);
        let base = x.base();
        let mut offset = vec![0; base.n_objects()];
        for c in 1..base.n_objects() {
            offset[c] = offset[c - 1] + x.card(c - 1);
        }
        let mut vars: Vec<(ObjId, Elem)> = Vec::with_capacity(x.total());
        for c in object_order(base) {
            for e in 0..x.card(c) {
                vars.push((c, e));
            }
        }
        if self.injective && base.objects().any(|c| x.card(c) > y.card(c)) {
            return Ok(());
        }
        let n = vars.len();
        let mut pos = vec![0; n];
        for (i, &(c, e)) in vars.iter().enumerate() {
            pos[offset[c] + e] = i;
        }
        let mut rules: Vec<Vec<Rule>> = vec![Vec::new(); n];
        for f in base.morphisms() {
            if base.is_identity(f) {
                continue;
            }
            let (s, d) = (base.src(f), base.dst(f));
            for e in 0..x.card(d) {
                let u = pos[offset[d] + e];
                let w = pos[offset[s] + x.res(f, e)];
                if u == w {
                    rules[u].push(Rule::Filter { other: w, mor: f });
                } else if w > u {
                    rules[w].push(Rule::Forced { other: u, mor: f });
                } else {
                    rules[u].push(Rule::Filter { other: w, mor: f });
                }
            }
        }
        let domains: Vec<Vec<Elem>> = vars
            .iter()
            .map(|&(c, e)| match &self.domains[offset[c] + e] {
                Some(d) => d.iter().copied().filter(|&v| v < y.card(c)).collect(),
                None => (0..y.card(c)).collect(),
            })
            .collect();
        let mut state = State {
            vars: &vars,
            rules: &rules,
            domains: &domains,
            y,
            assign: vec![0; n],
            used: if self.injective { y.cards().iter().map(|&k| vec![false; k]).collect() } else { Vec::new() },
            counter: NodeCounter::new("hom-set search nodes", self.node_limit),
            stop: false,
        };
        let cards = x.cards();
        state.go(0, &mut |assign: &[Elem]| {
            let mut comp: Vec<Vec<Elem>> = cards.iter().map(|&k| vec![0; k]).collect();
            for (i, &(c, e)) in vars.iter().enumerate() {
                comp[c][e] = assign[i];
            }
            visit(&PresheafMap { comp })
        })
    }

    pub fn collect(&self, limit: usize) -> Result<Vec<PresheafMap>, BudgetExceeded> {
        let mut out = Vec::new();
        let mut over = false;
        self.run(&mut |m| {
            if out.len() >= limit {
                over = true;
                return false;
            }
            out.push(m.clone());
            true
        })?;
        if over {
            return Err(BudgetExceeded::new("hom-set size", limit, limit + 1));
        }
        out.sort();
        Ok(out)
    }

    pub fn count(&self) -> Result<u64, BudgetExceeded> {
        let mut n = 0u64;
        self.run(&mut |_| {
            n += 1;
            true
        })?;
        Ok(n)
    }

    pub fn first(&self) -> Result<Option<PresheafMap>, BudgetExceeded> {
        let mut found = None;
        self.run(&mut |m| {
            found = Some(m.clone());
            false
        })?;
        Ok(found)
    }
}

struct State<'s> {
    vars: &'s [(ObjId, Elem)],
    rules: &'s [Vec<Rule>],
    domains: &'s [Vec<Elem>],
    y: &'s Presheaf,
    assign: Vec<Elem>,
    used: Vec<Vec<bool>>,
    counter: NodeCounter,
    stop: bool,
}

impl State<'_> {
    fn go(&mut self, i: usize, emit: &mut dyn FnMut(&[Elem]) -> bool) -> Result<(), BudgetExceeded> {
        if i == self.vars.len() {
            if !emit(&self.assign) {
                self.stop = true;
            }
            return Ok(());
        }
        self.counter.tick()?;
        let c = self.vars[i].0;
        let forced = self.rules[i].iter().find_map(|r| match *r {
            Rule::Forced { other, mor } => Some(self.y.res(mor, self.assign[other])),
            Rule::Filter { .. } => None,
        });
        let domain = &self.domains[i];
        let single;
        let cands: &[Elem] = match forced {
            Some(v) => {
                if !domain.contains(&v) {
                    return Ok(());
                }
                single = [v];
                &single
            }
            None => domain,
        };
        for &v in cands {
            if !self.used.is_empty() && self.used[c][v] {
                continue;
            }
            let ok = self.rules[i].iter().all(|r| match *r {
                Rule::Forced { other, mor } => self.y.res(mor, self.assign[other]) == v,
                Rule::Filter { other, mor } => {
                    let target = if other == i { v } else { self.assign[other] };
                    self.y.res(mor, v) == target
                }
            });
            if !ok {
                continue;
            }
            self.assign[i] = v;
            if !self.used.is_empty() {
                self.used[c][v] = true;
            }
            self.go(i + 1, emit)?;
            if !self.used.is_empty() {
                self.used[c][v] = false;
            }
            if self.stop {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// All natural transformations `x → y`, sorted.
pub fn hom_set(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<Vec<PresheafMap>, BudgetExceeded> {
    HomSearch::new(x, y).budget(budget).collect(budget.max_results)
}

/// An isomorphism `x → y`, if one exists.
pub fn find_iso(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<Option<PresheafMap>, BudgetExceeded> {
    if x.cards() != y.cards() {
        return Ok(None);
    }
    HomSearch::new(x, y).budget(budget).injective().first()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use alloc::sync::Arc;

    #[test]
    fn terminal_to_terminal() {
        let base = Arc::new(presets::chain(3));
        let one = Presheaf::terminal(base);
        assert_eq!(hom_set(&one, &one, &Budget::default()).unwrap().len(), 1);
    }

    #[test]
    fn set_exponent_count() {
        let base = Arc::new(presets::terminal());
        let x = Presheaf::new(base.clone(), vec![3], vec![vec![0, 1, 2]]).unwrap();
        let y = Presheaf::new(base, vec![2], vec![vec![0, 1]]).unwrap();
        assert_eq!(HomSearch::new(&x, &y).count().unwrap(), 8);
    }

    #[test]
    fn every_result_is_natural() {
        let base = Arc::new(presets::parallel_pair());
        let yb = Presheaf::representable(base.clone(), 1);
        let ya = Presheaf::representable(base, 0);
        for m in hom_set(&yb, &yb, &Budget::default()).unwrap() {
            assert_eq!(m.check(&yb, &yb), Ok(()));
        }
        // Yoneda: hom(y(a), y(b)) = hom(a, b)
        assert_eq!(hom_set(&ya, &yb, &Budget::default()).unwrap().len(), 2);
    }
}
