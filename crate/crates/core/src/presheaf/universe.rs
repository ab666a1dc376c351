//! A bounded universe: presheaf iso-class representatives with all maps
//! between them and all their subpresheaves.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::core::{Presheaf, PresheafMap, Subpresheaf};
use super::enumerate::{enumerate_presheaves, subpresheaves};
use super::search::hom_set;
use crate::budget::{Budget, BudgetExceeded};
use crate::fincat::FinCategory;

#[derive(Debug, Clone)]
pub struct Universe {
    pub base: Arc<FinCategory>,
    pub bound: usize,
    pub objects: Vec<Presheaf>,
    /// `homs[a][b]`: all maps `objects[a] → objects[b]`, sorted.
    pub homs: Vec<Vec<Vec<PresheafMap>>>,
    /// `subs[a]`: all subpresheaves of `objects[a]`, sorted.
    pub subs: Vec<Vec<Subpresheaf>>,
}

impl Universe {
    pub fn new(base: &Arc<FinCategory>, bound: usize, budget: &Budget) -> Result<Self, BudgetExceeded> {
        let objects = enumerate_presheaves(base, bound, budget)?;
        Self::from_objects(base, bound, objects, budget)
    }

    pub fn from_objects(
        base: &Arc<FinCategory>,
        bound: usize,
        objects: Vec<Presheaf>,
        budget: &Budget,
    ) -> Result<Self, BudgetExceeded> {
        let mut homs = Vec::with_capacity(objects.len());
        let mut total = 0usize;
        for x in &objects {
            let mut row = Vec::with_capacity(objects.len());
            for y in &objects {
                let h = hom_set(x, y, budget)?;
                total += h.len();
                if total > budget.max_results {
                    return Err(BudgetExceeded::new("universe maps", budget.max_results, total));
                }
                row.push(h);
            }
            homs.push(row);
        }
        let subs = objects.iter().map(|x| subpresheaves(x, budget)).collect::<Result<_, _>>()?;
        Ok(Universe { base: base.clone(), bound, objects, homs, subs })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn n_maps(&self) -> usize {
        self.homs.iter().flatten().map(Vec::len).sum()
    }

    /// Every map as `(source, target, index)`.
    pub fn maps(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.len())
            .flat_map(move |a| (0..self.len()).flat_map(move |b| (0..self.homs[a][b].len()).map(move |i| (a, b, i))))
    }

    pub fn map(&self, a: usize, b: usize, i: usize) -> &PresheafMap {
        &self.homs[a][b][i]
    }

    /// Index of the universe object isomorphic to `x`, by canonical form.
    pub fn find(&self, x: &Presheaf) -> Option<usize> {
        let canon = super::enumerate::canonical_form(x);
        self.objects.iter().position(|o| *o == canon)
    }
}
