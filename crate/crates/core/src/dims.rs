//! Exact Littlestone, threshold and VC dimensions.
//!
//! The Littlestone dimension is computed with the version-space recursion
//! `L(F) = max_x 1 + min(L(F_{x=0}), L(F_{x=1}))`, `L({f}) = 0`, `L({}) = -1`,
//! memoized on the hypothesis subset. The recursion is not trusted on its own:
//! a shattered tree of the reported depth is rebuilt from the argmax choices
//! and re-validated with [`shatters`].

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::trees::{shatters, LabeledTree, ShatterCertificate};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdimCertificate {
    pub tree: LabeledTree,
    pub certificate: ShatterCertificate,
}

impl LdimCertificate {
    pub fn depth(&self) -> usize {
        self.tree.depth()
    }

    pub fn verify(&self, class: &HypothesisClass) -> bool {
        self.certificate.verify(class, &self.tree)
    }
}

/// Points `x_1..x_d` threshold-shattered via hypotheses `f_1..f_d`:
/// `f_i(x_j) = 1` iff `i >= j`. Stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ThresholdWitness {
    pub points: Vec<usize>,
    pub hyps: Vec<usize>,
}

impl ThresholdWitness {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessCheck {
    Valid,
    /// First failing pair in row-major order, 0-based.
    Violation {
        i: usize,
        j: usize,
    },
}

impl WitnessCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, WitnessCheck::Valid)
    }
}

impl fmt::Display for WitnessCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessCheck::Valid => write!(f, "valid"),
            WitnessCheck::Violation { i, j } => write!(f, "violation at ({}, {})", i + 1, j + 1),
        }
    }
}

/// Memoized Littlestone recursion over version spaces of one class.
pub(crate) struct LdimSolver<'a> {
    class: &'a HypothesisClass,
    memo: HashMap<FixedBitSet, i32>,
    visited: u64,
    max_states: u64,
}

fn floor_log2(n: usize) -> i32 {
    debug_assert!(n > 0);
    (usize::BITS - 1 - n.leading_zeros()) as i32
}

impl<'a> LdimSolver<'a> {
    pub(crate) fn new(class: &'a HypothesisClass, limits: &Limits) -> Self {
        LdimSolver {
            class,
            memo: HashMap::default(),
            visited: 0,
            max_states: limits.max_states,
        }
    }

    /// Points that split `vs` into two nonempty parts, one per distinct split,
    /// keeping the lowest point index of each.
    fn splitting_points(&self, vs: &FixedBitSet) -> Vec<(usize, FixedBitSet, FixedBitSet)> {
        let total = vs.count_ones(..);
        let mut seen = HashSet::default();
        let mut out = Vec::new();
        for x in 0..self.class.domain_size() {
            let ones = self.class.split(vs, x, true);
            let c = ones.count_ones(..);
            if c == 0 || c == total {
                continue;
            }
            if seen.insert(ones.clone()) {
                let zeros = self.class.split(vs, x, false);
                out.push((x, zeros, ones));
            }
        }
        out
    }

    /// `L(vs)`, with `-1` for the empty version space.
    pub(crate) fn value(&mut self, vs: &FixedBitSet) -> Result<i32> {
        let count = vs.count_ones(..);
        if count == 0 {
            return Ok(-1);
        }
        if count == 1 {
            return Ok(0);
        }
        if let Some(&v) = self.memo.get(vs) {
            return Ok(v);
        }
        self.visited += 1;
        if self.visited > self.max_states {
            return Err(Error::budget(
                "Littlestone states",
                self.visited,
                self.max_states,
            ));
        }
        let upper = floor_log2(count);
        let mut best = 0;
        for (_, zeros, ones) in self.splitting_points(vs) {
            let (small, large) = if zeros.count_ones(..) <= ones.count_ones(..) {
                (zeros, ones)
            } else {
                (ones, zeros)
            };
            if floor_log2(small.count_ones(..)) < best {
                continue;
            }
            let a = self.value(&small)?;
            if a < best {
                continue;
            }
            let b = self.value(&large)?;
            best = best.max(1 + a.min(b));
            if best == upper {
                break;
            }
        }
        self.memo.insert(vs.clone(), best);
        Ok(best)
    }

    /// Heap-order point labels of a depth-`depth` tree shattered by `vs`.
    /// Requires `value(vs) >= depth`.
    fn build_tree(&mut self, vs: &FixedBitSet, depth: usize) -> Result<Vec<usize>> {
        if depth == 0 {
            return Ok(Vec::new());
        }
        let need = depth as i32 - 1;
        for (x, zeros, ones) in self.splitting_points(vs) {
            if self.value(&zeros)? >= need && self.value(&ones)? >= need {
                let left = self.build_tree(&zeros, depth - 1)?;
                let right = self.build_tree(&ones, depth - 1)?;
                return Ok(join_subtrees(x, &left, &right, depth));
            }
        }
        Err(Error::Contradiction(format!(
            "no point realizes Littlestone value {depth}"
        )))
    }
}

/// Heap-order array of a tree with root `root` and the given subtrees.
fn join_subtrees(root: usize, left: &[usize], right: &[usize], depth: usize) -> Vec<usize> {
    let mut values = Vec::with_capacity((1 << depth) - 1);
    values.push(root);
    for level in 0..depth - 1 {
        let start = (1 << level) - 1;
        let end = (1 << (level + 1)) - 1;
        values.extend_from_slice(&left[start..end]);
        values.extend_from_slice(&right[start..end]);
    }
    values
}

fn certify(class: &HypothesisClass, depth: usize, values: Vec<usize>) -> Result<LdimCertificate> {
    let tree = LabeledTree::points(depth, values)?;
    match shatters(class, &tree)? {
        Some(certificate) => Ok(LdimCertificate { tree, certificate }),
        None => Err(Error::Contradiction(format!(
            "materialized depth-{depth} tree is not shattered"
        ))),
    }
}

/// Exact Littlestone dimension with a validated shattered tree.
pub fn ldim(class: &HypothesisClass, limits: &Limits) -> Result<(usize, LdimCertificate)> {
    if class.is_empty() {
        return Err(Error::EmptyClass);
    }
    let mut solver = LdimSolver::new(class, limits);
    let all = class.all();
    let d = solver.value(&all)? as usize;
    let values = solver.build_tree(&all, d)?;
    Ok((d, certify(class, d, values)?))
}

/// A validated shattered tree of depth `target`, if the class has one.
pub fn ldim_at_least(
    class: &HypothesisClass,
    target: usize,
    limits: &Limits,
) -> Result<Option<LdimCertificate>> {
    let mut search = DepthSearch {
        class,
        memo: HashMap::default(),
        visited: 0,
        max_states: limits.max_states,
    };
    let all = class.all();
    if !search.reaches(&all, target)? {
        return Ok(None);
    }
    let values = search.build(&all, target)?;
    certify(class, target, values).map(Some)
}

/// Depth-limited variant of the Littlestone recursion: "does `vs` shatter
/// some tree of depth `t`?".
struct DepthSearch<'a> {
    class: &'a HypothesisClass,
    memo: HashMap<(FixedBitSet, usize), bool>,
    visited: u64,
    max_states: u64,
}

impl DepthSearch<'_> {
    fn candidates(&self, vs: &FixedBitSet, t: usize) -> Vec<(usize, FixedBitSet, FixedBitSet)> {
        let need = 1usize << (t - 1);
        let mut seen = HashSet::default();
        let mut out = Vec::new();
        for x in 0..self.class.domain_size() {
            let ones = self.class.split(vs, x, true);
            let zeros = self.class.split(vs, x, false);
            if ones.count_ones(..) < need || zeros.count_ones(..) < need {
                continue;
            }
            if seen.insert(ones.clone()) {
                out.push((x, zeros, ones));
            }
        }
        out
    }

    fn reaches(&mut self, vs: &FixedBitSet, t: usize) -> Result<bool> {
        let count = vs.count_ones(..);
        if t == 0 {
            return Ok(count > 0);
        }
        if t >= usize::BITS as usize || count < 1 << t {
            return Ok(false);
        }
        let key = (vs.clone(), t);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.visited += 1;
        if self.visited > self.max_states {
            return Err(Error::budget(
                "depth search states",
                self.visited,
                self.max_states,
            ));
        }
        let mut found = false;
        for (_, zeros, ones) in self.candidates(vs, t) {
            if self.reaches(&zeros, t - 1)? && self.reaches(&ones, t - 1)? {
                found = true;
                break;
            }
        }
        self.memo.insert(key, found);
        Ok(found)
    }

    fn build(&mut self, vs: &FixedBitSet, t: usize) -> Result<Vec<usize>> {
        if t == 0 {
            return Ok(Vec::new());
        }
        for (x, zeros, ones) in self.candidates(vs, t) {
            if self.reaches(&zeros, t - 1)? && self.reaches(&ones, t - 1)? {
                let left = self.build(&zeros, t - 1)?;
                let right = self.build(&ones, t - 1)?;
                return Ok(join_subtrees(x, &left, &right, t));
            }
        }
        Err(Error::Contradiction(format!("no depth-{t} split found")))
    }
}

/// Checks `f_i(x_j) = 1[i >= j]` for all pairs.
pub fn check_threshold_witness(
    class: &HypothesisClass,
    w: &ThresholdWitness,
) -> Result<WitnessCheck> {
    if w.points.len() != w.hyps.len() {
        return Err(Error::input(format!(
            "witness has {} points but {} hypotheses",
            w.points.len(),
            w.hyps.len()
        )));
    }
    for &x in &w.points {
        class.check_point(x)?;
    }
    for &h in &w.hyps {
        class.check_hypothesis(h)?;
    }
    for (i, &h) in w.hyps.iter().enumerate() {
        for (j, &x) in w.points.iter().enumerate() {
            if class.eval(h, x) != (i >= j) {
                return Ok(WitnessCheck::Violation { i, j });
            }
        }
    }
    Ok(WitnessCheck::Valid)
}

/// Staircase search. A staircase of length `d + 1` extends one of length `d`
/// by a point on which every chosen hypothesis is 0 and a hypothesis that is 1
/// on every chosen point, so the state is (admissible points, admissible
/// hypotheses).
struct StaircaseSearch<'a> {
    class: &'a HypothesisClass,
    memo: HashMap<(FixedBitSet, FixedBitSet), usize>,
    placed: HashMap<(FixedBitSet, FixedBitSet), usize>,
    visited: u64,
    max_states: u64,
}

impl StaircaseSearch<'_> {
    fn moves(
        &self,
        points: &FixedBitSet,
        hyps: &FixedBitSet,
    ) -> Vec<(usize, usize, FixedBitSet, FixedBitSet)> {
        let mut out = Vec::new();
        for x in points.ones() {
            let mut next_hyps = hyps.clone();
            next_hyps.intersect_with(self.class.column(x));
            let mut seen = HashSet::default();
            for f in next_hyps.ones() {
                let mut next_points = points.clone();
                next_points.difference_with(self.class.row(f));
                if seen.insert(next_points.clone()) {
                    out.push((x, f, next_points, next_hyps.clone()));
                }
            }
        }
        out
    }

    /// Drops points no admissible hypothesis is 1 on, hypotheses that are 0
    /// on every admissible point, and all but the first of any points (or
    /// hypotheses) that agree on the current submatrix; none of them can
    /// lengthen a staircase.
    fn normalize(&self, points: &FixedBitSet, hyps: &FixedBitSet) -> (FixedBitSet, FixedBitSet) {
        let mut p = points.clone();
        let mut h = hyps.clone();
        loop {
            let mut changed = false;
            let mut seen = HashSet::default();
            for x in p.clone().ones() {
                let mut col = self.class.column(x).clone();
                col.intersect_with(&h);
                if col.is_clear() || !seen.insert(col) {
                    p.set(x, false);
                    changed = true;
                }
            }
            let mut seen = HashSet::default();
            for f in h.clone().ones() {
                let mut row = self.class.row(f).clone();
                row.intersect_with(&p);
                if row.is_clear() || !seen.insert(row) {
                    h.set(f, false);
                    changed = true;
                }
            }
            if !changed {
                return (p, h);
            }
        }
    }

    /// Best length once a point has been placed, leaving `hyps` admissible.
    fn after_point(&mut self, points: &FixedBitSet, hyps: &FixedBitSet) -> Result<usize> {
        let key = (points.clone(), hyps.clone());
        if let Some(&v) = self.placed.get(&key) {
            return Ok(v);
        }
        let mut best = 0;
        let mut seen = HashSet::default();
        for f in hyps.ones() {
            let mut next_points = points.clone();
            next_points.difference_with(self.class.row(f));
            if next_points.count_ones(..) < best {
                continue;
            }
            if seen.insert(next_points.clone()) {
                best = best.max(1 + self.longest(&next_points, hyps)?);
            }
        }
        self.placed.insert(key, best);
        Ok(best)
    }

    fn longest(&mut self, points: &FixedBitSet, hyps: &FixedBitSet) -> Result<usize> {
        let (points, hyps) = self.normalize(points, hyps);
        let (points, hyps) = (&points, &hyps);
        let upper = points.count_ones(..).min(hyps.count_ones(..));
        if upper == 0 {
            return Ok(0);
        }
        let key = (points.clone(), hyps.clone());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.visited += 1;
        if self.visited > self.max_states {
            return Err(Error::budget(
                "staircase states",
                self.visited,
                self.max_states,
            ));
        }
        let mut best = 0;
        let mut seen = HashSet::default();
        for x in points.ones() {
            let mut next_hyps = hyps.clone();
            next_hyps.intersect_with(self.class.column(x));
            if next_hyps.count_ones(..) <= best || !seen.insert(next_hyps.clone()) {
                continue;
            }
            best = best.max(self.after_point(points, &next_hyps)?);
            if best == upper {
                break;
            }
        }
        self.memo.insert(key, best);
        Ok(best)
    }
}

/// Exact threshold dimension with a validated witness.
pub fn tdim(class: &HypothesisClass, limits: &Limits) -> Result<(usize, ThresholdWitness)> {
    if class.is_empty() {
        return Err(Error::EmptyClass);
    }
    // The pattern survives transposing the matrix and reversing both lists,
    // and the search is cheaper over the shorter side.
    let (d, witness) = if class.domain_size() > class.len() {
        let mut seen = HashSet::default();
        let reps: Vec<usize> = (0..class.domain_size())
            .filter(|&x| seen.insert(class.column(x).clone()))
            .collect();
        let transposed =
            HypothesisClass::new(class.len(), reps.iter().map(|&x| class.column(x).clone()))?;
        let (d, w) = staircase(&transposed, limits)?;
        let witness = ThresholdWitness {
            points: w.hyps.iter().rev().map(|&k| reps[k]).collect(),
            hyps: w.points.iter().rev().copied().collect(),
        };
        (d, witness)
    } else {
        staircase(class, limits)?
    };
    if !check_threshold_witness(class, &witness)?.is_valid() {
        return Err(Error::Contradiction(
            "threshold witness failed validation".into(),
        ));
    }
    Ok((d, witness))
}

fn staircase(class: &HypothesisClass, limits: &Limits) -> Result<(usize, ThresholdWitness)> {
    let mut search = StaircaseSearch {
        class,
        memo: HashMap::default(),
        placed: HashMap::default(),
        visited: 0,
        max_states: limits.max_states,
    };
    let mut points = FixedBitSet::with_capacity(class.domain_size());
    points.insert_range(..);
    let mut hyps = class.all();
    let d = search.longest(&points, &hyps)?;

    let mut witness = ThresholdWitness::default();
    for remaining in (1..=d).rev() {
        let mut step = None;
        for (x, f, p, h) in search.moves(&points, &hyps) {
            if remaining == 1 || search.longest(&p, &h)? + 1 == remaining {
                step = Some((x, f, p, h));
                break;
            }
        }
        let (x, f, p, h) = step.ok_or_else(|| {
            Error::Contradiction(format!("staircase of length {d} could not be rebuilt"))
        })?;
        witness.points.push(x);
        witness.hyps.push(f);
        points = p;
        hyps = h;
    }
    Ok((d, witness))
}

/// Exact VC dimension together with a largest shattered point set.
pub fn vcdim_with_witness(class: &HypothesisClass, limits: &Limits) -> Result<(usize, Vec<usize>)> {
    if class.is_empty() {
        return Err(Error::EmptyClass);
    }
    // Constant columns are never in a shattered set, and of several identical
    // columns at most one is.
    let mut seen = HashSet::default();
    let usable: Vec<usize> = (0..class.domain_size())
        .filter(|&x| {
            let c = class.column(x);
            let ones = c.count_ones(..);
            ones > 0 && ones < class.len() && seen.insert(c.clone())
        })
        .collect();
    let upper = floor_log2(class.len()) as usize;
    let n = usable.len();
    let cols: Vec<&FixedBitSet> = usable.iter().map(|&x| class.column(x)).collect();

    // A shattered set paired with the partition of the class by its patterns.
    struct Shattered {
        points: Vec<usize>,
        blocks: Vec<FixedBitSet>,
    }
    let splits = |blocks: &[FixedBitSet], col: &FixedBitSet| {
        blocks
            .iter()
            .all(|b| !b.is_subset(col) && !b.is_disjoint(col))
    };
    let mut all = FixedBitSet::with_capacity(class.len());
    all.insert_range(..);

    // Shattered sets are closed under subsets, so every shattered set of size
    // s + 1 extends a shattered set of size s by a larger point, and each of
    // its points pairs with every other into a shattered pair.
    let mut pairs = vec![FixedBitSet::with_capacity(n); n];
    let mut visited = 0u64;
    let bump = |visited: &mut u64| {
        *visited += 1;
        if *visited > limits.max_states {
            Err(Error::budget(
                "VC candidate sets",
                *visited,
                limits.max_states,
            ))
        } else {
            Ok(())
        }
    };
    let mut level = vec![Shattered {
        points: Vec::new(),
        blocks: vec![all],
    }];
    let mut best = Vec::new();
    for size in 0..upper {
        let members: HashSet<&[usize]> = level.iter().map(|s| s.points.as_slice()).collect();
        let mut next = Vec::new();
        let mut sub = Vec::with_capacity(size + 1);
        for set in &level {
            let start = set.points.last().map_or(0, |&last| last + 1);
            let mut cand = FixedBitSet::with_capacity(n);
            cand.insert_range(start..);
            if size >= 2 {
                for &p in &set.points {
                    cand.intersect_with(&pairs[p]);
                }
            }
            for i in cand.ones() {
                if size >= 2 {
                    let closed = (0..size).all(|drop| {
                        sub.clear();
                        sub.extend(
                            set.points
                                .iter()
                                .enumerate()
                                .filter(|&(k, _)| k != drop)
                                .map(|(_, &p)| p),
                        );
                        sub.push(i);
                        members.contains(sub.as_slice())
                    });
                    if !closed {
                        continue;
                    }
                }
                bump(&mut visited)?;
                if splits(&set.blocks, cols[i]) {
                    let mut blocks = Vec::with_capacity(2 * set.blocks.len());
                    for b in &set.blocks {
                        let mut one = b.clone();
                        one.intersect_with(cols[i]);
                        let mut zero = b.clone();
                        zero.difference_with(cols[i]);
                        blocks.push(zero);
                        blocks.push(one);
                    }
                    let mut points = set.points.clone();
                    points.push(i);
                    next.push(Shattered { points, blocks });
                }
            }
        }
        if size == 1 {
            for s in &next {
                pairs[s.points[0]].insert(s.points[1]);
                pairs[s.points[1]].insert(s.points[0]);
            }
        }
        if next.is_empty() {
            break;
        }
        best = next[0].points.iter().map(|&i| usable[i]).collect();
        level = next;
    }
    Ok((best.len(), best))
}

/// Exact VC dimension.
pub fn vcdim(class: &HypothesisClass, limits: &Limits) -> Result<usize> {
    vcdim_with_witness(class, limits).map(|(d, _)| d)
}

/// Whether the class realizes all `2^|points|` labelings of `points`.
pub fn is_shattered(class: &HypothesisClass, points: &[usize]) -> bool {
    if points.len() >= usize::BITS as usize - 1 || class.len() < 1 << points.len() {
        return false;
    }
    let patterns: HashSet<u64> = (0..class.len())
        .map(|h| {
            points
                .iter()
                .fold(0u64, |acc, &x| (acc << 1) | class.eval(h, x) as u64)
        })
        .collect();
    patterns.len() == 1 << points.len()
}
