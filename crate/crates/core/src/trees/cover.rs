//! 0-covers of a class on a point tree.
//!
//! A set of bit trees `V` is a 0-cover for `F` on `x` when for every `f` and
//! every `e_{1:n-1}` some `v` in `V` satisfies `f(x_t(e_{1:t-1})) = v_t(e_{1:t-1})`
//! for all `t` in `1..=n`. The level-`n` node only depends on `e_{1:n-1}`, so
//! the quantifier ranges over the `2^(n-1)` root-to-leaf paths and a tree
//! matches `f` on a path when their `n`-bit path strings agree.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{node_index, signs, LabeledTree, TreeKind, MAX_DEPTH};
use crate::aggregator::BooleanAggregator;
use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSet {
    depth: usize,
    trees: Vec<LabeledTree>,
}

impl CoverSet {
    /// Every member must be a bit tree of the given depth. An empty set is
    /// representable so that validators can reject it.
    pub fn new(depth: usize, trees: Vec<LabeledTree>) -> Result<Self> {
        if depth == 0 || depth > MAX_DEPTH {
            return Err(Error::input(format!("cover depth {depth} is out of range")));
        }
        for t in &trees {
            t.expect_kind(TreeKind::Bits)?;
            if t.depth() != depth {
                return Err(Error::DepthMismatch {
                    expected: depth,
                    found: t.depth(),
                });
            }
        }
        Ok(CoverSet { depth, trees })
    }

    /// Builds a cover from raw node-bit vectors, dropping repeated trees.
    pub fn from_bit_vectors(depth: usize, trees: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let trees = trees
            .into_iter()
            .filter(|t| seen.insert(t.clone()))
            .map(|t| LabeledTree::bits(depth, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(depth, trees)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn trees(&self) -> &[LabeledTree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    fn path_string(&self, tree: usize, path: u64) -> u64 {
        path_string(self.depth, path, |node| {
            self.trees[tree].values()[node] == 1
        })
    }
}

/// Bits read along the root-to-leaf path `path` (an encoded `e_{1:n-1}`),
/// the root's bit most significant.
fn path_string(n: usize, path: u64, mut bit: impl FnMut(usize) -> bool) -> u64 {
    (1..=n).fold(0, |acc, t| {
        let node = node_index(t, path >> (n - t));
        (acc << 1) | bit(node) as u64
    })
}

/// For each root-to-leaf path, the distinct path strings realized by the
/// class (`S_e` in sorted order) and, per hypothesis, its own string.
#[derive(Debug, Clone)]
pub struct PathStrings {
    depth: usize,
    per_path: Vec<Vec<u64>>,
}

impl PathStrings {
    pub fn new(class: &HypothesisClass, tree: &LabeledTree) -> Result<Self> {
        tree.check_points(class)?;
        let n = tree.depth();
        if n == 0 {
            return Err(Error::input("covers need a tree of depth at least 1"));
        }
        let paths = 1u64 << (n - 1);
        let per_path = (0..paths)
            .map(|p| {
                let mut strings: Vec<u64> = (0..class.len())
                    .map(|f| hypothesis_string(class, tree, f, p))
                    .collect();
                strings.sort_unstable();
                strings.dedup();
                strings
            })
            .collect();
        Ok(PathStrings { depth: n, per_path })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn paths(&self) -> usize {
        self.per_path.len()
    }

    pub fn strings(&self, path: usize) -> &[u64] {
        &self.per_path[path]
    }

    /// `max_e |S_e|`, a lower bound on every 0-cover.
    pub fn lower_bound(&self) -> usize {
        self.per_path.iter().map(Vec::len).max().unwrap_or(0)
    }
}

fn hypothesis_string(class: &HypothesisClass, tree: &LabeledTree, f: usize, path: u64) -> u64 {
    path_string(tree.depth(), path, |node| {
        class.eval(f, tree.values()[node])
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverCheck {
    Valid,
    /// Hypothesis `hypothesis` is matched by no tree along `signs` (`e_{1:n-1}`).
    Counterexample {
        hypothesis: usize,
        signs: Vec<i8>,
    },
}

impl CoverCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CoverCheck::Valid)
    }
}

/// Checks the 0-cover condition, reporting the first failing pair in order of
/// hypothesis index, then sign sequence (`-1` before `+1`).
pub fn is_zero_cover(
    cover: &CoverSet,
    class: &HypothesisClass,
    tree: &LabeledTree,
) -> Result<CoverCheck> {
    tree.check_points(class)?;
    if cover.depth() != tree.depth() {
        return Err(Error::DepthMismatch {
            expected: tree.depth(),
            found: cover.depth(),
        });
    }
    let n = tree.depth();
    let paths = 1u64 << (n - 1);
    let available: Vec<HashSet<u64>> = (0..paths)
        .map(|p| (0..cover.len()).map(|v| cover.path_string(v, p)).collect())
        .collect();
    for f in 0..class.len() {
        for p in 0..paths {
            if !available[p as usize].contains(&hypothesis_string(class, tree, f, p)) {
                return Ok(CoverCheck::Counterexample {
                    hypothesis: f,
                    signs: signs(p, n - 1),
                });
            }
        }
    }
    Ok(CoverCheck::Valid)
}

/// One evaluation tree per hypothesis, deduplicated: a cover of size at most `|F|`.
pub fn canonical_cover(class: &HypothesisClass, tree: &LabeledTree) -> Result<CoverSet> {
    tree.check_points(class)?;
    if tree.depth() == 0 {
        return Err(Error::input("covers need a tree of depth at least 1"));
    }
    let trees = (0..class.len())
        .map(|f| {
            tree.values()
                .iter()
                .map(|&x| class.eval(f, x) as usize)
                .collect()
        })
        .collect();
    CoverSet::from_bit_vectors(tree.depth(), trees)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone)]
pub struct MinCover {
    pub cover: CoverSet,
    /// `max_e |S_e|`.
    pub lower_bound: usize,
    /// Whether `cover` is proved minimal.
    pub exact: bool,
}

/// Minimal 0-cover (exact branch and bound) or a greedy cover.
pub fn min_zero_cover(
    class: &HypothesisClass,
    tree: &LabeledTree,
    mode: CoverMode,
    limits: &Limits,
) -> Result<MinCover> {
    let strings = PathStrings::new(class, tree)?;
    let lower_bound = strings.lower_bound();
    let cover = match mode {
        CoverMode::Greedy => {
            let trees = greedy_trees(&strings);
            CoverSet::from_bit_vectors(tree.depth(), trees)?
        }
        CoverMode::Exact => {
            if tree.depth()
                > limits
                    .exact_cover_max_depth
                    .min(super::exact::HARD_MAX_DEPTH)
            {
                return Err(Error::budget(
                    "exact cover depth (try greedy mode)",
                    tree.depth(),
                    limits.exact_cover_max_depth as u64,
                ));
            }
            if class.len() > limits.exact_cover_max_class {
                return Err(Error::budget(
                    "exact cover class size (try greedy mode)",
                    class.len(),
                    limits.exact_cover_max_class as u64,
                ));
            }
            let trees = super::exact::minimum_cover(&strings, limits)?;
            CoverSet::from_bit_vectors(tree.depth(), trees)?
        }
    };
    Ok(MinCover {
        cover,
        lower_bound,
        exact: mode == CoverMode::Exact,
    })
}

/// Greedy cover: each round adds the consistent bit tree that covers the most
/// still-uncovered `(path, string)` pairs, found exactly by a recursion over
/// `(node, prefix)`. Ties go to bit 0 at the shallowest differing node.
pub(crate) fn greedy_trees(strings: &PathStrings) -> Vec<Vec<usize>> {
    let n = strings.depth();
    let nodes = (1usize << n) - 1;
    let prefixes = ValidPrefixes::new(strings);
    let mut uncovered: Vec<HashSet<u64>> = (0..strings.paths())
        .map(|p| strings.strings(p).iter().copied().collect())
        .collect();
    let mut out = Vec::new();
    while uncovered.iter().any(|s| !s.is_empty()) {
        let mut values = vec![0usize; nodes];
        let gain = best_subtree(&prefixes, &uncovered, n, 1, 0, 0, &mut values);
        debug_assert!(gain > 0);
        for (p, set) in uncovered.iter_mut().enumerate() {
            set.remove(&path_string(n, p as u64, |node| values[node] == 1));
        }
        out.push(values);
    }
    out
}

/// Maximum number of uncovered pairs a consistent assignment of the subtree
/// at `(level, prefix)` can hit, given the bits `above` on the path to it.
/// Writes the maximizing assignment into `values`.
fn best_subtree(
    prefixes: &ValidPrefixes,
    uncovered: &[HashSet<u64>],
    n: usize,
    level: usize,
    prefix: u64,
    above: u64,
    values: &mut [usize],
) -> usize {
    let node = node_index(level, prefix);
    let mut best: Option<(usize, usize)> = None;
    let mut scratch = values.to_vec();
    for b in 0..2u64 {
        let s = (above << 1) | b;
        if !prefixes.contains(level, prefix, s) {
            continue;
        }
        let gain = if level == n {
            uncovered[prefix as usize].contains(&s) as usize
        } else {
            best_subtree(
                prefixes,
                uncovered,
                n,
                level + 1,
                prefix << 1,
                s,
                &mut scratch,
            ) + best_subtree(
                prefixes,
                uncovered,
                n,
                level + 1,
                (prefix << 1) | 1,
                s,
                &mut scratch,
            )
        };
        if best.is_none_or(|(g, _)| gain > g) {
            best = Some((gain, b as usize));
            scratch[node] = b as usize;
            copy_subtree(&scratch, values, n, level, prefix);
        }
    }
    best.map_or(0, |(g, _)| g)
}

fn copy_subtree(from: &[usize], to: &mut [usize], n: usize, level: usize, prefix: u64) {
    for depth in 0..=(n - level) {
        let first = prefix << depth;
        for off in 0..1u64 << depth {
            let node = node_index(level + depth, first + off);
            to[node] = from[node];
        }
    }
}

/// The set of bit strings that can appear on the path from the root to each
/// node: prefixes of path strings of the paths through that node.
pub(crate) struct ValidPrefixes {
    n: usize,
    sets: Vec<HashSet<u64>>,
}

impl ValidPrefixes {
    pub(crate) fn new(strings: &PathStrings) -> Self {
        let n = strings.depth();
        let mut sets = vec![HashSet::new(); (1usize << n) - 1];
        for p in 0..strings.paths() as u64 {
            for &s in strings.strings(p as usize) {
                for t in 1..=n {
                    sets[node_index(t, p >> (n - t))].insert(s >> (n - t));
                }
            }
        }
        ValidPrefixes { n, sets }
    }

    pub(crate) fn contains(&self, level: usize, prefix: u64, bits: u64) -> bool {
        debug_assert!(level <= self.n);
        self.sets[node_index(level, prefix)].contains(&bits)
    }
}

/// The cover `{ w^tau : tau in V_1 x ... x V_k }` with
/// `w^tau_t(e) = G(v^1_t(e), ..., v^k_t(e))`, deduplicated in tuple order.
pub fn product_cover(
    g: &BooleanAggregator,
    covers: &[CoverSet],
    limits: &Limits,
) -> Result<CoverSet> {
    let k = g.arity();
    if covers.len() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            found: covers.len(),
        });
    }
    let depth = covers[0].depth();
    for c in covers {
        if c.depth() != depth {
            return Err(Error::DepthMismatch {
                expected: depth,
                found: c.depth(),
            });
        }
    }
    if covers.iter().any(CoverSet::is_empty) {
        return CoverSet::new(depth, Vec::new());
    }
    let total = covers
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64));
    if total.is_none_or(|t| t > limits.max_tuples) {
        let required = covers
            .iter()
            .map(|c| c.len().to_string())
            .collect::<Vec<_>>()
            .join(" x ");
        return Err(Error::budget(
            "product cover tuples",
            required,
            limits.max_tuples,
        ));
    }

    let nodes = (1usize << depth) - 1;
    let mut idx = vec![0usize; k];
    let mut seen = HashMap::new();
    let mut trees = Vec::new();
    loop {
        let values: Vec<usize> = (0..nodes)
            .map(|node| {
                let index = idx.iter().zip(covers).fold(0usize, |acc, (&i, c)| {
                    (acc << 1) | c.trees()[i].values()[node]
                });
                g.eval_index(index) as usize
            })
            .collect();
        if !seen.contains_key(&values) {
            seen.insert(values.clone(), trees.len());
            trees.push(LabeledTree::bits(depth, values)?);
        }
        let mut l = k;
        loop {
            if l == 0 {
                return CoverSet::new(depth, trees);
            }
            l -= 1;
            idx[l] += 1;
            if idx[l] < covers[l].len() {
                break;
            }
            idx[l] = 0;
        }
    }
}

/// `sum_{i=0}^{d} C(n, i)`.
pub fn sauer_bound(n: u64, d: u64) -> BigUint {
    let mut term = BigUint::one();
    let mut total = BigUint::zero();
    for i in 0..=d.min(n) {
        if i > 0 {
            term = term * BigUint::from(n - i + 1) / BigUint::from(i);
        }
        total += &term;
    }
    total
}
