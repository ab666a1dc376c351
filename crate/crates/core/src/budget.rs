//! Explicit resource limits for the exhaustive algorithms.
//!
//! Every enumeration in this crate is exponential in some parameter. Limits are
//! plain configuration values; running past one is an error, never a silent
//! truncation.

use core::fmt;

/// Resource limits shared by all modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Objects allowed in a category handed to reflective-subcategory search.
    pub max_objects: usize,
    /// Morphisms allowed in a category handed to reflective-subcategory search.
    pub max_morphisms: usize,
    /// Objects allowed in the base of a presheaf topos.
    pub max_base_objects: usize,
    /// Morphisms allowed in the base of a presheaf topos.
    pub max_base_morphisms: usize,
    /// Largest carrier a presheaf enumeration may produce.
    pub max_carrier: usize,
    /// Largest carrier an exponential (or any hom-set) may produce at one object.
    pub max_exponential: usize,
    /// Node limit for a single backtracking search.
    pub max_search_nodes: u64,
    /// Limit on the number of results of a single enumeration.
    pub max_results: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_objects: 8,
            max_morphisms: 40,
            max_base_objects: 3,
            max_base_morphisms: 6,
            max_carrier: 4,
            max_exponential: 10_000,
            max_search_nodes: 200_000_000,
            max_results: 2_000_000,
        }
    }
}

/// Raised when an operation would exceed its [`Budget`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub what: &'static str,
    pub limit: u64,
    pub requested: u64,
}

impl BudgetExceeded {
    pub fn new(what: &'static str, limit: impl TryInto<u64>, requested: impl TryInto<u64>) -> Self {
        BudgetExceeded {
            what,
            limit: limit.try_into().unwrap_or(u64::MAX),
            requested: requested.try_into().unwrap_or(u64::MAX),
        }
    }
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "budget exceeded: {} (limit {}, requested {})", self.what, self.limit, self.requested)
    }
}

impl core::error::Error for BudgetExceeded {}

/// Node counter for backtracking searches.
#[derive(Debug, Clone)]
pub(crate) struct NodeCounter {
    nodes: u64,
    limit: u64,
    what: &'static str,
}

impl NodeCounter {
    pub(crate) fn new(what: &'static str, limit: u64) -> Self {
        NodeCounter { nodes: 0, limit, what }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.limit {
            Err(BudgetExceeded::new(self.what, self.limit, self.nodes))
        } else {
            Ok(())
        }
    }
}
