//! Desk-scale checks of the closure and covering inequalities.
//!
//! Each check computes both sides exactly where possible and reports them
//! alongside a pass flag; callers decide how to present failures.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::aggregator::BooleanAggregator;
use crate::class::HypothesisClass;
use crate::compose::compose;
use crate::dims::{ldim, tdim};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::ramsey::{
    color_edges, extract_threshold, find_mono_clique, largest_mono_clique, ramsey_bound,
    StaircaseInstance,
};
use crate::trees::{
    is_zero_cover, min_zero_cover, product_cover, sauer_bound, thicket_count, CoverMode, CoverSet,
    LabeledTree,
};

/// `max { N : 2^N <= prod_i sum_{j <= d_i} C(N, j) }`.
pub fn ldim_closure_exact_bound(dims: &[usize]) -> u64 {
    let total: u64 = dims.iter().map(|&d| d as u64).sum();
    if total == 0 {
        return 0;
    }
    let product = |n: u64| -> BigUint {
        dims.iter()
            .fold(BigUint::one(), |acc, &d| acc * sauer_bound(n, d as u64))
    };
    let mut best = 0;
    let mut n = 0u64;
    loop {
        let lhs = BigUint::one() << n;
        if lhs <= product(n) {
            best = n;
        } else if n + 1 >= 2 * total {
            // From here on 2^N / (N + 1)^total only grows, and the product is at
            // most (N + 1)^total.
            let poly = BigUint::from(n + 1).pow(total as u32);
            if lhs > poly {
                return best;
            }
        }
        n += 1;
    }
}

/// `max { N : 2^N <= (e N / d)^(k d) }`, solved in logs; 0 when `d = 0`.
pub fn ldim_closure_implicit_bound(k: usize, d: usize) -> u64 {
    if d == 0 || k == 0 {
        return 0;
    }
    let (k, d) = (k as f64, d as f64);
    // Concave in N and nonnegative at N = d.
    let slack = |n: f64| k * d * (1.0 + (n / d).ln()) - n * std::f64::consts::LN_2;
    let mut lo = d as u64;
    let mut hi = lo.max(1);
    while slack(hi as f64) >= 0.0 {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if slack(mid as f64) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone, Serialize)]
pub struct LdimClosureReport {
    pub constituent_ldims: Vec<usize>,
    pub composed_size: usize,
    pub composed_ldim: usize,
    /// Heap-order points of the composed class's shattered tree.
    pub tree: Vec<usize>,
    /// Cover size per constituent on that tree, and whether it is minimal.
    pub cover_sizes: Vec<usize>,
    pub covers_exact: Vec<bool>,
    pub product_cover_size: usize,
    pub product_cover_valid: bool,
    pub exact_bound: u64,
    pub implicit_bound: u64,
    pub pass: bool,
}

/// Computes `N = Ldim(G(H_1..H_k))`, covers every constituent on the shattered
/// depth-`N` tree, and checks `2^N <= |W|`, `N <= exact_bound <= implicit_bound`.
pub fn check_ldim_closure(
    g: &BooleanAggregator,
    classes: &[HypothesisClass],
    limits: &Limits,
) -> Result<LdimClosureReport> {
    let constituent_ldims = classes
        .iter()
        .map(|c| ldim(c, limits).map(|r| r.0))
        .collect::<Result<Vec<_>>>()?;
    let composed = compose(g, classes, false, limits)?.class;
    let (n, cert) = ldim(&composed, limits)?;
    let d = constituent_ldims.iter().copied().max().unwrap_or(0);
    let exact_bound = ldim_closure_exact_bound(&constituent_ldims);
    let implicit_bound = ldim_closure_implicit_bound(classes.len(), d);

    let mut cover_sizes = Vec::new();
    let mut covers_exact = Vec::new();
    let mut product_cover_size = 1;
    let mut product_cover_valid = true;
    if n > 0 {
        let covers = classes
            .iter()
            .map(|c| best_effort_cover(c, &cert.tree, limits))
            .collect::<Result<Vec<_>>>()?;
        for (cover, exact) in &covers {
            cover_sizes.push(cover.len());
            covers_exact.push(*exact);
        }
        let sets: Vec<CoverSet> = covers.into_iter().map(|(c, _)| c).collect();
        let w = product_cover(g, &sets, limits)?;
        product_cover_size = w.len();
        product_cover_valid = is_zero_cover(&w, &composed, &cert.tree)?.is_valid();
    }
    let pass = cert.verify(&composed)
        && product_cover_valid
        && (n >= 64 || (1u64 << n) <= product_cover_size as u64)
        && n as u64 <= exact_bound
        && n as u64 <= implicit_bound;
    Ok(LdimClosureReport {
        constituent_ldims,
        composed_size: composed.len(),
        composed_ldim: n,
        tree: cert.tree.values().to_vec(),
        cover_sizes,
        covers_exact,
        product_cover_size,
        product_cover_valid,
        exact_bound,
        implicit_bound,
        pass,
    })
}

/// Exact minimum cover when within limits, greedy otherwise.
fn best_effort_cover(
    class: &HypothesisClass,
    tree: &LabeledTree,
    limits: &Limits,
) -> Result<(CoverSet, bool)> {
    match min_zero_cover(class, tree, CoverMode::Exact, limits) {
        Ok(c) => Ok((c.cover, true)),
        Err(Error::BudgetExceeded { .. }) => Ok((
            min_zero_cover(class, tree, CoverMode::Greedy, limits)?.cover,
            false,
        )),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TdimClosureReport {
    pub constituent_tdims: Vec<usize>,
    pub composed_tdim: usize,
    pub witness_points: Vec<usize>,
    pub witness_hyps: Vec<usize>,
    /// `ramsey_bound(k, max(d, 1))` in decimal.
    pub ramsey_bound: String,
    pub largest_mono_clique: usize,
    /// Coordinate and length of a witness read off a `(2d+1)`-clique, if any.
    pub extracted: Option<(usize, usize)>,
    /// Whether a clique large enough to beat every constituent was found.
    pub contradiction_clique: bool,
    pub pass: bool,
}

/// Computes the composed threshold dimension and its witness, compares it to
/// the Ramsey bound, and runs extraction on the witness's staircase: a
/// `(2d + 3)`-clique must not exist, and any `(2d + 1)`-clique must extract.
pub fn check_tdim_closure(
    g: &BooleanAggregator,
    classes: &[HypothesisClass],
    limits: &Limits,
) -> Result<TdimClosureReport> {
    let constituent_tdims = classes
        .iter()
        .map(|c| tdim(c, limits).map(|r| r.0))
        .collect::<Result<Vec<_>>>()?;
    let d = constituent_tdims.iter().copied().max().unwrap_or(0);
    let composition = compose(g, classes, true, limits)?;
    let (n, witness) = tdim(&composition.class, limits)?;
    let bound = ramsey_bound(classes.len() as u32, d.max(1) as u32);
    let tuples = composition.witness.expect("witnesses were requested");
    let inst = StaircaseInstance::from_composition(g, classes, &tuples, &witness)?;
    let coloring = color_edges(&inst)?;
    let largest = largest_mono_clique(&coloring);
    let contradiction_clique = find_mono_clique(&coloring, 2 * (d + 1) + 1).is_some();
    let mut extracted = None;
    let mut extraction_ok = true;
    if d >= 1 && n > 2 * d {
        match extract_threshold(&inst, d) {
            Ok(ex) => {
                extraction_ok = ex.witness.len() == d;
                extracted = Some((ex.coordinate, ex.witness.len()));
            }
            Err(Error::NoClique { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let within = bound >= BigUint::from(n);
    Ok(TdimClosureReport {
        constituent_tdims,
        composed_tdim: n,
        witness_points: witness.points,
        witness_hyps: witness.hyps,
        ramsey_bound: bound.to_string(),
        largest_mono_clique: largest,
        extracted,
        contradiction_clique,
        pass: within && extraction_ok && !contradiction_clique,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SauerReport {
    pub depth: usize,
    pub ldim: usize,
    pub min_cover: usize,
    pub sauer_bound: String,
    pub pass: bool,
}

/// `N_0(F, x) <= sum_{i <= Ldim(F)} C(n, i)`.
pub fn check_sauer(
    class: &HypothesisClass,
    tree: &LabeledTree,
    limits: &Limits,
) -> Result<SauerReport> {
    let (d, _) = ldim(class, limits)?;
    let cover = min_zero_cover(class, tree, CoverMode::Exact, limits)?;
    let n = tree.depth();
    let bound = sauer_bound(n as u64, d as u64);
    Ok(SauerReport {
        depth: n,
        ldim: d,
        min_cover: cover.cover.len(),
        pass: BigUint::from(cover.cover.len()) <= bound,
        sauer_bound: bound.to_string(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ThicketReport {
    pub rho: u64,
    pub path_lower_bound: usize,
    pub min_cover: usize,
    pub pass: bool,
}

/// `rho(F, x) <= N_0(F, x)`.
pub fn check_thicket(
    class: &HypothesisClass,
    tree: &LabeledTree,
    limits: &Limits,
) -> Result<ThicketReport> {
    let rho = thicket_count(class, tree)?;
    let cover = min_zero_cover(class, tree, CoverMode::Exact, limits)?;
    Ok(ThicketReport {
        rho,
        path_lower_bound: cover.lower_bound,
        min_cover: cover.cover.len(),
        pass: rho <= cover.cover.len() as u64,
    })
}

/// Approximate `log2` of a big integer, for human-facing summaries.
pub fn log2_approx(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().map_or(0.0, f64::log2);
    }
    let shift = bits - 53;
    let top = (n >> shift).to_f64().unwrap_or(0.0);
    top.log2() + shift as f64
}
