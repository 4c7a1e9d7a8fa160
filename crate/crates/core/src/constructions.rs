//! Generators for the explicit classes, trees and aggregators used by the
//! closure bounds.
//!
//! Cube points are numbered in binary counting order: point `i` of
//! `{0,1}^D` has coordinate `j` (1-based) equal to bit `D - j` of `i`, so
//! coordinate 1 is the most significant. Points of `{0..D^k - 1}` are read in
//! base `D` with digit 1 most significant.

use std::collections::HashSet;

use crate::aggregator::BooleanAggregator;
use crate::class::HypothesisClass;
use crate::dims::tdim;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::trees::{node_index, LabeledTree, TreeKind};

fn check_domain(size: u128, limits: &Limits) -> Result<usize> {
    if size > limits.max_domain as u128 {
        return Err(Error::budget("domain size", size, limits.max_domain as u64));
    }
    Ok(size as usize)
}

/// Value of cube coordinate `j` (0-based, coordinate 0 most significant) at point `i`.
#[inline]
fn cube_bit(i: usize, j: usize, dims: usize) -> bool {
    (i >> (dims - 1 - j)) & 1 == 1
}

/// `{ x -> x_j : j in 1..=D }` over the cube `{0,1}^D`.
pub fn projections_class(dims: usize, limits: &Limits) -> Result<HypothesisClass> {
    if dims == 0 || dims >= 64 {
        return Err(Error::input(format!(
            "cube dimension {dims} is out of range"
        )));
    }
    let m = check_domain(1u128 << dims, limits)?;
    HypothesisClass::from_fn(m, dims, |j, i| cube_bit(i, j, dims))
}

/// Monotone disjunctions of at most `k` distinct coordinates, ordered by
/// number of literals and then lexicographically by coordinate list.
pub fn monotone_disjunctions(dims: usize, k: usize, limits: &Limits) -> Result<HypothesisClass> {
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    if dims == 0 || dims >= 64 {
        return Err(Error::input(format!(
            "cube dimension {dims} is out of range"
        )));
    }
    let m = check_domain(1u128 << dims, limits)?;
    let mut literal_sets: Vec<Vec<usize>> = Vec::new();
    for size in 1..=k.min(dims) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            literal_sets.push(combo.clone());
            // Next combination in lexicographic order.
            let mut i = size;
            while i > 0 && combo[i - 1] == dims - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for t in i..size {
                combo[t] = combo[t - 1] + 1;
            }
        }
    }
    if literal_sets.len() as u64 * m as u64 > limits.max_tuples {
        return Err(Error::budget(
            "disjunction table entries",
            literal_sets.len() as u64 * m as u64,
            limits.max_tuples,
        ));
    }
    HypothesisClass::from_fn(m, literal_sets.len(), |h, i| {
        literal_sets[h].iter().any(|&j| cube_bit(i, j, dims))
    })
}

/// `f_b(x) = 1[b >= x]` for `b in 0..D`, over `{0..D-1}`.
pub fn thresholds_class(d: usize) -> Result<HypothesisClass> {
    if d == 0 {
        return Err(Error::input("threshold domain must be nonempty"));
    }
    HypothesisClass::from_fn(d, d, |b, x| b >= x)
}

/// Heap index of the leftmost node on level `t` (1-based).
fn leftmost(t: usize) -> usize {
    node_index(t, 0)
}

/// A depth-`n` tree whose `2^n - 1` nodes are distinct points (point `i` is
/// heap node `i`), and the class of all functions vanishing on the leftmost
/// node of every level. Only the all-`-1` sign sequence admits a solution,
/// while covers still need a separate tree for every sequence starting `+1`.
pub fn thicket_gap_instance(n: usize) -> Result<(HypothesisClass, LabeledTree)> {
    if !(2..=4).contains(&n) {
        return Err(Error::input(format!(
            "thicket gap depth {n} must be in 2..=4"
        )));
    }
    let m = (1usize << n) - 1;
    let fixed: HashSet<usize> = (1..=n).map(leftmost).collect();
    let free: Vec<usize> = (0..m).filter(|x| !fixed.contains(x)).collect();
    let class = HypothesisClass::from_fn(m, 1 << free.len(), |h, x| {
        free.iter()
            .position(|&p| p == x)
            .is_some_and(|bit| (h >> bit) & 1 == 1)
    })?;
    let labels = (1..=n)
        .flat_map(|t| (1..=1usize << (t - 1)).map(move |j| format!("x_{t},{j}")))
        .collect();
    let class = class.with_labels(labels)?;
    let tree = LabeledTree::from_fn(n, TreeKind::Points, node_index)?;
    Ok((class, tree))
}

/// The rule `G~(y_1..y_k, z_1..z_k)`: 1 iff all `y` are 1, or for the smallest
/// `j` with `z_j = 0` the prefix `y_1..y_j` is all 1.
pub fn staircase_rule(y: &[bool], z: &[bool]) -> bool {
    if y.iter().all(|&b| b) {
        return true;
    }
    match z.iter().position(|&b| !b) {
        Some(j) => y[..=j].iter().all(|&b| b),
        None => false,
    }
}

/// `G~` of arity `2k`, and `G(y, y', z) = G~(y OR y', z)` of arity `3k`.
pub fn staircase_aggregators(
    k: usize,
    limits: &Limits,
) -> Result<(BooleanAggregator, BooleanAggregator)> {
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    if 3 * k > limits.max_arity {
        return Err(Error::budget(
            "aggregator arity",
            3 * k,
            limits.max_arity as u64,
        ));
    }
    let gtilde = BooleanAggregator::from_fn(2 * k, |v| staircase_rule(&v[..k], &v[k..]))?;
    let g = BooleanAggregator::from_fn(3 * k, |v| {
        let y: Vec<bool> = (0..k).map(|j| v[j] || v[k + j]).collect();
        staircase_rule(&y, &v[2 * k..])
    })?;
    Ok((gtilde, g))
}

/// Base-`D` digit `j` (0-based, digit 0 most significant) of `x`.
#[inline]
pub fn digit(x: usize, j: usize, base: usize, k: usize) -> usize {
    (x / base.pow((k - 1 - j) as u32)) % base
}

fn product_domain(base: usize, k: usize, limits: &Limits) -> Result<usize> {
    if base == 0 || k == 0 {
        return Err(Error::input("base and k must be at least 1"));
    }
    let size = (base as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    check_domain(size, limits)
}

/// Lifts a class on `{0..D-1}` through coordinate `j` (0-based) of `{0..D^k-1}`:
/// `h_{j,f}(x_1..x_k) = f(x_j)`.
pub fn lift(
    class: &HypothesisClass,
    k: usize,
    j: usize,
    limits: &Limits,
) -> Result<HypothesisClass> {
    let base = class.domain_size();
    if j >= k {
        return Err(Error::input(format!(
            "coordinate {j} out of range for k = {k}"
        )));
    }
    let m = product_domain(base, k, limits)?;
    HypothesisClass::from_fn(m, class.len(), |f, x| class.eval(f, digit(x, j, base, k)))
}

/// `g_{j,b}(x) = 1[x_j = b]` for `b in 0..D`.
pub fn point_indicators(
    base: usize,
    k: usize,
    j: usize,
    limits: &Limits,
) -> Result<HypothesisClass> {
    if j >= k {
        return Err(Error::input(format!(
            "coordinate {j} out of range for k = {k}"
        )));
    }
    let m = product_domain(base, k, limits)?;
    HypothesisClass::from_fn(m, base, |b, x| digit(x, j, base, k) == b)
}

/// `tau_{j,b}(x) = 1[b >= x_j]` for `b in 0..D`, coordinate `j` 0-based.
pub fn coordinate_thresholds(
    base: usize,
    k: usize,
    j: usize,
    limits: &Limits,
) -> Result<HypothesisClass> {
    if j >= k {
        return Err(Error::input(format!(
            "coordinate {j} out of range for k = {k}"
        )));
    }
    let m = product_domain(base, k, limits)?;
    HypothesisClass::from_fn(m, base, |b, x| b >= digit(x, j, base, k))
}

/// The threshold lower-bound instance: classes `(H_1..H_k, H_1..H_k, G_1..G_k)`
/// over `{0..D^k - 1}` with `H_j` the lift of `inner` through coordinate `j`
/// and `G_j` the point indicators of coordinate `j`, plus the arity-`3k` rule.
pub fn tdim_lb_instance(
    inner: &HypothesisClass,
    k: usize,
    limits: &Limits,
) -> Result<(Vec<HypothesisClass>, BooleanAggregator)> {
    let base = inner.domain_size();
    product_domain(base, k, limits)?;
    let lifted = (0..k)
        .map(|j| lift(inner, k, j, limits))
        .collect::<Result<Vec<_>>>()?;
    let indicators = (0..k)
        .map(|j| point_indicators(base, k, j, limits))
        .collect::<Result<Vec<_>>>()?;
    let mut classes = lifted.clone();
    classes.extend(lifted);
    classes.extend(indicators);
    let (_, g) = staircase_aggregators(k, limits)?;
    Ok((classes, g))
}

/// Outcome of [`search_small_j`].
#[derive(Debug, Clone)]
pub enum SmallJ {
    Found(HypothesisClass),
    /// The search space was exhausted without a qualifying class.
    Absent,
}

/// Exhaustive search for a class `J` on `{0..D-1}` with `tdim(J) <= tdim_budget`,
/// `|J| <= size_budget`, whose pairwise ORs contain every threshold
/// `1[b >= x]`.
///
/// If some `J` qualifies, so does the sub-class made of one OR-pair per
/// threshold (threshold dimension is monotone under subsets), so the search
/// only picks such pairs, threshold by threshold. Pairs that add fewer new
/// functions are tried first; functions are ordered by their bit pattern.
/// Returns `BudgetExceeded` when `limits.max_search_nodes` runs out before
/// the space is exhausted.
pub fn search_small_j(
    d: usize,
    tdim_budget: usize,
    size_budget: usize,
    limits: &Limits,
) -> Result<SmallJ> {
    if d == 0 || d > 6 {
        return Err(Error::input(format!(
            "small-J search needs 1 <= D <= 6, got {d}"
        )));
    }
    let mut search = SmallJSearch {
        d,
        tdim_budget,
        size_budget,
        limits,
        nodes: 0,
        chosen: Vec::new(),
    };
    Ok(match search.extend(0)? {
        Some(j) => SmallJ::Found(j),
        None => SmallJ::Absent,
    })
}

struct SmallJSearch<'a> {
    d: usize,
    tdim_budget: usize,
    size_budget: usize,
    limits: &'a Limits,
    nodes: u64,
    /// Functions as bitmasks, bit `x` = value at `x`.
    chosen: Vec<u32>,
}

impl SmallJSearch<'_> {
    fn class_of(&self, fns: &[u32]) -> Result<HypothesisClass> {
        let d = self.d;
        HypothesisClass::from_fn(d, fns.len(), |h, x| (fns[h] >> x) & 1 == 1)
    }

    fn extend(&mut self, b: usize) -> Result<Option<HypothesisClass>> {
        self.nodes += 1;
        if self.nodes > self.limits.max_search_nodes {
            return Err(Error::budget(
                "small-J search nodes",
                self.nodes,
                self.limits.max_search_nodes,
            ));
        }
        if b == self.d {
            let mut fns = self.chosen.clone();
            fns.sort_unstable();
            return self.class_of(&fns).map(Some);
        }
        let target: u32 = (1u32 << (b + 1)) - 1;
        // Already realized by chosen functions?
        let have: HashSet<u32> = self.chosen.iter().copied().collect();
        if self
            .chosen
            .iter()
            .any(|&f| self.chosen.iter().any(|&g| f | g == target))
        {
            return self.extend(b + 1);
        }
        // Pairs (f, g), f <= g, f | g = target, both submasks of target.
        let mut pairs: Vec<(usize, u32, u32)> = Vec::new();
        for f in 0..=target {
            if f & !target != 0 {
                continue;
            }
            for g in f..=target {
                if g & !target != 0 || f | g != target {
                    continue;
                }
                let new = [f, g]
                    .iter()
                    .filter(|v| !have.contains(v))
                    .collect::<HashSet<_>>()
                    .len();
                pairs.push((new, f, g));
            }
        }
        pairs.sort_unstable();
        for (new, f, g) in pairs {
            if self.chosen.len() + new > self.size_budget {
                continue;
            }
            let before = self.chosen.len();
            for v in [f, g] {
                if !self.chosen.contains(&v) {
                    self.chosen.push(v);
                }
            }
            let ok = {
                let mut fns = self.chosen.clone();
                fns.sort_unstable();
                let class = self.class_of(&fns)?;
                tdim(&class, self.limits)?.0 <= self.tdim_budget
            };
            if ok {
                if let Some(found) = self.extend(b + 1)? {
                    return Ok(Some(found));
                }
            }
            self.chosen.truncate(before);
        }
        Ok(None)
    }
}

/// Whether `{f OR g : f, g in j}` contains every threshold on `{0..D-1}`.
pub fn or_closure_has_thresholds(j: &HypothesisClass) -> bool {
    let d = j.domain_size();
    (0..d).all(|b| {
        (0..j.len()).any(|f| {
            (0..j.len()).any(|g| (0..d).all(|x| (j.eval(f, x) || j.eval(g, x)) == (b >= x)))
        })
    })
}
