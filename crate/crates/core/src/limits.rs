/// Resource guardrails for the exhaustive searches.
///
/// Every exact routine in the crate checks the relevant field and fails with
/// [`Error::BudgetExceeded`](crate::Error::BudgetExceeded) instead of running
/// unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Tuples enumerated by `compose` and `product_cover`.
    pub max_tuples: u64,
    /// Memoized states in the dimension and game searches.
    pub max_states: u64,
    /// Largest domain accepted by the generators.
    pub max_domain: usize,
    /// Largest tree depth for the exact minimal cover.
    pub exact_cover_max_depth: usize,
    /// Largest class for the exact minimal cover.
    pub exact_cover_max_class: usize,
    /// Candidate bit-trees enumerated by the exact minimal cover.
    pub max_cover_candidates: u64,
    /// Branch-and-bound nodes, shared by the set-cover and small-J searches.
    pub max_search_nodes: u64,
    /// Largest aggregator arity whose truth table may be materialized.
    pub max_arity: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_tuples: 10_000_000,
            max_states: 5_000_000,
            max_domain: 1 << 16,
            exact_cover_max_depth: 4,
            exact_cover_max_class: 64,
            max_cover_candidates: 1 << 20,
            max_search_nodes: 50_000_000,
            max_arity: 24,
        }
    }
}

impl Limits {
    /// Same limits with a different tuple budget.
    pub fn with_max_tuples(mut self, max_tuples: u64) -> Self {
        self.max_tuples = max_tuples;
        self
    }

    pub fn with_max_states(mut self, max_states: u64) -> Self {
        self.max_states = max_states;
        self
    }

    /// Caps every counted search (states, nodes, tuples, cover candidates) at
    /// `budget`, leaving the size limits alone.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.max_tuples = budget;
        self.max_states = budget;
        self.max_cover_candidates = budget;
        self.max_search_nodes = budget;
        self
    }
}
