//! Ramsey extraction of a threshold-shattered sequence from a composed one.
//!
//! A [`StaircaseInstance`] lists points `x_1..x_N` and, for each `i`, a tuple
//! of constituent hypotheses whose aggregate equals `1[i >= j]` on `x_j`.
//! Coloring each pair `p < q` by the first coordinate where the two tuples
//! disagree and finding a monochromatic clique of size `2d + 1` yields a
//! threshold witness of length `d` inside a single constituent class.
//!
//! Indices are 0-based throughout; `Display` impls print them 1-based.

use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;

use crate::aggregator::BooleanAggregator;
use crate::class::HypothesisClass;
use crate::compose::CompositionWitness;
use crate::dims::{check_threshold_witness, ThresholdWitness, WitnessCheck};
use crate::error::{Error, Result};

/// `(2k)^((2d + 1) * 2k)`.
pub fn ramsey_bound(k: u32, d: u32) -> BigUint {
    let c = 2 * k as u64;
    let exponent = (2 * d as u64 + 1) * c;
    BigUint::from(c).pow(exponent as u32)
}

#[derive(Debug, Clone)]
pub struct StaircaseInstance {
    pub points: Vec<usize>,
    /// `witnesses[i][l]` indexes a hypothesis of `classes[l]`.
    pub witnesses: Vec<Vec<usize>>,
    pub classes: Vec<HypothesisClass>,
    pub aggregator: BooleanAggregator,
}

impl StaircaseInstance {
    pub fn new(
        points: Vec<usize>,
        witnesses: Vec<Vec<usize>>,
        classes: Vec<HypothesisClass>,
        aggregator: BooleanAggregator,
    ) -> Result<Self> {
        let inst = StaircaseInstance {
            points,
            witnesses,
            classes,
            aggregator,
        };
        inst.check_shape()?;
        Ok(inst)
    }

    /// Builds the instance behind a threshold witness of a composed class.
    pub fn from_composition(
        aggregator: &BooleanAggregator,
        classes: &[HypothesisClass],
        witness: &CompositionWitness,
        threshold: &ThresholdWitness,
    ) -> Result<Self> {
        let mut tuples = Vec::with_capacity(threshold.hyps.len());
        for &h in &threshold.hyps {
            if h >= witness.len() {
                return Err(Error::HypothesisOutOfRange {
                    index: h,
                    len: witness.len(),
                });
            }
            tuples.push(witness.tuple(h).to_vec());
        }
        Self::new(
            threshold.points.clone(),
            tuples,
            classes.to_vec(),
            aggregator.clone(),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.aggregator.arity()
    }

    fn check_shape(&self) -> Result<()> {
        let k = self.aggregator.arity();
        if self.classes.len() != k {
            return Err(Error::ArityMismatch {
                expected: k,
                found: self.classes.len(),
            });
        }
        if self.witnesses.len() != self.points.len() {
            return Err(Error::input(format!(
                "{} points but {} witness tuples",
                self.points.len(),
                self.witnesses.len()
            )));
        }
        let m = match self.classes.first() {
            Some(c) => c.domain_size(),
            None => return Err(Error::input("an instance needs at least one class")),
        };
        for c in &self.classes {
            if c.domain_size() != m {
                return Err(Error::DomainMismatch {
                    expected: m,
                    found: c.domain_size(),
                });
            }
        }
        for &x in &self.points {
            self.classes[0].check_point(x)?;
        }
        for tuple in &self.witnesses {
            if tuple.len() != k {
                return Err(Error::ArityMismatch {
                    expected: k,
                    found: tuple.len(),
                });
            }
            for (c, &h) in self.classes.iter().zip(tuple) {
                c.check_hypothesis(h)?;
            }
        }
        Ok(())
    }

    /// `h_{il}(x_j)`.
    #[inline]
    pub fn value(&self, i: usize, l: usize, j: usize) -> bool {
        self.classes[l].eval(self.witnesses[i][l], self.points[j])
    }

    /// Checks `G(h_{i1}(x_j), .., h_{ik}(x_j)) = 1[i >= j]`, reporting the
    /// first failing pair in row-major order.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        let k = self.arity();
        let mut inputs = vec![false; k];
        for i in 0..self.len() {
            for j in 0..self.len() {
                for (l, v) in inputs.iter_mut().enumerate() {
                    *v = self.value(i, l, j);
                }
                if self.aggregator.eval(&inputs)? != (i >= j) {
                    return Err(Error::StaircaseViolation { i, j });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeColor {
    pub coordinate: usize,
    pub bit: bool,
}

impl EdgeColor {
    /// Position in the order `(0,0), (0,1), (1,0), ..`.
    pub fn index(self) -> usize {
        2 * self.coordinate + self.bit as usize
    }

    pub fn from_index(index: usize) -> Self {
        EdgeColor {
            coordinate: index / 2,
            bit: index % 2 == 1,
        }
    }
}

impl fmt::Display for EdgeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.coordinate + 1, self.bit as u8)
    }
}

/// Colors of all pairs `p < q`, stored row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    vertices: usize,
    colors_used: usize,
    colors: Vec<EdgeColor>,
}

impl EdgeColoring {
    /// `colors_used` is the palette size `2k`; every color must be below it.
    pub fn new(vertices: usize, colors_used: usize, colors: Vec<EdgeColor>) -> Result<Self> {
        let pairs = vertices * vertices.saturating_sub(1) / 2;
        if colors.len() != pairs {
            return Err(Error::input(format!(
                "{vertices} vertices need {pairs} edge colors, got {}",
                colors.len()
            )));
        }
        if let Some(c) = colors.iter().find(|c| c.index() >= colors_used) {
            return Err(Error::input(format!(
                "edge color {c} lies outside a palette of {colors_used}"
            )));
        }
        Ok(EdgeColoring {
            vertices,
            colors_used,
            colors,
        })
    }

    /// Builds a coloring from `f(p, q)` for `p < q`.
    pub fn from_fn(
        vertices: usize,
        colors_used: usize,
        mut f: impl FnMut(usize, usize) -> EdgeColor,
    ) -> Result<Self> {
        let mut colors = Vec::new();
        for p in 0..vertices {
            for q in p + 1..vertices {
                colors.push(f(p, q));
            }
        }
        Self::new(vertices, colors_used, colors)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn palette(&self) -> usize {
        self.colors_used
    }

    fn slot(&self, p: usize, q: usize) -> usize {
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        p * (2 * self.vertices - p - 1) / 2 + (q - p - 1)
    }

    /// Color of the pair `{p, q}`, `p != q`.
    pub fn color(&self, p: usize, q: usize) -> EdgeColor {
        assert!(p != q && p < self.vertices && q < self.vertices);
        self.colors[self.slot(p, q)]
    }

    /// Number of edges carrying each color, indexed by [`EdgeColor::index`].
    pub fn histogram(&self) -> Vec<usize> {
        let mut counts = vec![0; self.colors_used];
        for c in &self.colors {
            counts[c.index()] += 1;
        }
        counts
    }

    /// Whether all pairs inside `vertices` share one color.
    pub fn is_monochromatic(&self, vertices: &[usize]) -> bool {
        let mut color = None;
        for (a, &p) in vertices.iter().enumerate() {
            for &q in &vertices[a + 1..] {
                if p == q {
                    return false;
                }
                let c = self.color(p, q);
                if *color.get_or_insert(c) != c {
                    return false;
                }
            }
        }
        true
    }

    fn adjacency(&self, color: EdgeColor) -> Vec<FixedBitSet> {
        let n = self.vertices;
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for p in 0..n {
            for q in p + 1..n {
                if self.color(p, q) == color {
                    adj[p].insert(q);
                    adj[q].insert(p);
                }
            }
        }
        adj
    }
}

/// Colors pair `p < q` by `(l, h_{pl}(x_q))`, `l` the first coordinate with
/// `h_{pl}(x_q) != h_{ql}(x_p)`. Validates the instance first.
pub fn color_edges(inst: &StaircaseInstance) -> Result<EdgeColoring> {
    inst.validate()?;
    let k = inst.arity();
    let n = inst.len();
    let mut colors = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for p in 0..n {
        for q in p + 1..n {
            let l = (0..k)
                .find(|&l| inst.value(p, l, q) != inst.value(q, l, p))
                .ok_or_else(|| {
                    Error::Contradiction(format!(
                        "tuples {} and {} agree on every coordinate",
                        p + 1,
                        q + 1
                    ))
                })?;
            colors.push(EdgeColor {
                coordinate: l,
                bit: inst.value(p, l, q),
            });
        }
    }
    EdgeColoring::new(n, 2 * k, colors)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoClique {
    pub color: EdgeColor,
    /// Increasing vertex indices.
    pub vertices: Vec<usize>,
}

/// Lexicographically least clique of exactly `size` vertices in `adj`.
fn first_clique(adj: &[FixedBitSet], size: usize) -> Option<Vec<usize>> {
    fn go(
        adj: &[FixedBitSet],
        size: usize,
        chosen: &mut Vec<usize>,
        candidates: &FixedBitSet,
    ) -> bool {
        if chosen.len() == size {
            return true;
        }
        if chosen.len() + candidates.count_ones(..) < size {
            return false;
        }
        for v in candidates.ones() {
            let mut next = candidates.clone();
            next.intersect_with(&adj[v]);
            next.set_range(..v + 1, false);
            chosen.push(v);
            if go(adj, size, chosen, &next) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let n = adj.len();
    if size == 0 {
        return Some(Vec::new());
    }
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    let mut chosen = Vec::with_capacity(size);
    go(adj, size, &mut chosen, &all).then_some(chosen)
}

/// Size of the largest clique in `adj` (branch and bound).
fn max_clique_size(adj: &[FixedBitSet]) -> usize {
    fn go(adj: &[FixedBitSet], depth: usize, candidates: FixedBitSet, best: &mut usize) {
        if depth > *best {
            *best = depth;
        }
        for v in candidates.ones() {
            let rest = {
                let mut r = candidates.clone();
                r.set_range(..v + 1, false);
                r
            };
            if depth + 1 + rest.count_ones(..) <= *best {
                return;
            }
            let mut next = rest;
            next.intersect_with(&adj[v]);
            go(adj, depth + 1, next, best);
        }
    }
    let mut all = FixedBitSet::with_capacity(adj.len());
    all.insert_range(..);
    let mut best = 0;
    go(adj, 0, all, &mut best);
    best
}

/// Exact search over colors in index order; within the first color that has
/// one, the lexicographically least clique of the requested size.
pub fn find_mono_clique(coloring: &EdgeColoring, size: usize) -> Option<MonoClique> {
    if size > coloring.vertices() {
        return None;
    }
    if size <= 1 {
        // Degenerate: any vertex set of size <= 1 is monochromatic in color 0.
        return Some(MonoClique {
            color: EdgeColor::from_index(0),
            vertices: (0..size).collect(),
        });
    }
    (0..coloring.palette()).find_map(|c| {
        let color = EdgeColor::from_index(c);
        first_clique(&coloring.adjacency(color), size)
            .map(|vertices| MonoClique { color, vertices })
    })
}

/// Largest monochromatic clique over all colors (at least 1 vertex when the
/// graph is nonempty, since a single vertex trivially qualifies).
pub fn largest_mono_clique(coloring: &EdgeColoring) -> usize {
    let n = coloring.vertices();
    if n == 0 {
        return 0;
    }
    (0..coloring.palette())
        .map(|c| max_clique_size(&coloring.adjacency(EdgeColor::from_index(c))))
        .max()
        .unwrap_or(1)
        .max(1)
}

/// Result of [`extract_threshold`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub coloring: EdgeColoring,
    pub clique: MonoClique,
    /// Constituent class holding the witness.
    pub coordinate: usize,
    /// Witness over `classes[coordinate]`.
    pub witness: ThresholdWitness,
}

/// Reads a length-`d` threshold witness off a monochromatic clique of size
/// `2d + 1` and validates it against the constituent class.
pub fn extract_threshold(inst: &StaircaseInstance, d: usize) -> Result<Extraction> {
    if d == 0 {
        return Err(Error::input("extraction needs d >= 1"));
    }
    let coloring = color_edges(inst)?;
    let size = 2 * d + 1;
    let clique = find_mono_clique(&coloring, size).ok_or_else(|| Error::NoClique {
        required: size,
        largest: largest_mono_clique(&coloring),
    })?;
    let witness = witness_from_clique(inst, &clique, d);
    let t = clique.color.coordinate;
    match check_threshold_witness(&inst.classes[t], &witness)? {
        WitnessCheck::Valid => Ok(Extraction {
            coloring,
            clique,
            coordinate: t,
            witness,
        }),
        WitnessCheck::Violation { i, j } => Err(Error::Contradiction(format!(
            "extracted witness fails at ({}, {})",
            i + 1,
            j + 1
        ))),
    }
}

/// With clique `i_1 < .. < i_{2d+1}` of color `(t, y)`:
/// `y = 0` pairs points `x_{i_2}, x_{i_4}, .., x_{i_2d}` with hypotheses
/// `h_{i_3 t}, h_{i_5 t}, .., h_{i_{2d+1} t}`; `y = 1` pairs points
/// `x_{i_2d}, .., x_{i_2}` with `h_{i_{2d-1} t}, .., h_{i_1 t}`.
fn witness_from_clique(
    inst: &StaircaseInstance,
    clique: &MonoClique,
    d: usize,
) -> ThresholdWitness {
    let v = &clique.vertices;
    let t = clique.color.coordinate;
    // `at(r)` is the vertex i_r for 1-based r.
    let at = |r: usize| v[r - 1];
    let (point_ranks, hyp_ranks): (Vec<usize>, Vec<usize>) = if clique.color.bit {
        (1..=d).map(|a| (2 * (d - a + 1), 2 * (d - a) + 1)).unzip()
    } else {
        (1..=d).map(|a| (2 * a, 2 * a + 1)).unzip()
    };
    ThresholdWitness {
        points: point_ranks.iter().map(|&r| inst.points[at(r)]).collect(),
        hyps: hyp_ranks
            .iter()
            .map(|&r| inst.witnesses[at(r)][t])
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregator::{named_aggregator, NamedRule};
    use crate::constructions::thresholds_class;

    fn or_instance(n: usize) -> StaircaseInstance {
        let th = thresholds_class(n).unwrap();
        let or = named_aggregator(NamedRule::Or, 2).unwrap();
        StaircaseInstance::new(
            (0..n).collect(),
            (0..n).map(|i| vec![i, i]).collect(),
            vec![th.clone(), th],
            or,
        )
        .unwrap()
    }

    /// NOT applied to strict upper thresholds `1[x > b]`: h_i(x_j) = 1[j > i]
    /// and NOT(h_i(x_j)) = 1[i >= j]. Pairs p < q get h_p(x_q) = 1.
    fn not_instance(n: usize) -> StaircaseInstance {
        let strict = HypothesisClass::from_fn(n, n, |b, x| x > b).unwrap();
        let not = named_aggregator(NamedRule::Not, 1).unwrap();
        StaircaseInstance::new(
            (0..n).collect(),
            (0..n).map(|i| vec![i]).collect(),
            vec![strict],
            not,
        )
        .unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(ramsey_bound(1, 1), BigUint::from(64u32));
        assert_eq!(ramsey_bound(1, 2), BigUint::from(1024u32));
        assert_eq!(ramsey_bound(2, 1), BigUint::from(16_777_216u32));
        let big = ramsey_bound(10, 10);
        assert_eq!(big, BigUint::from(20u32).pow(420));
    }

    #[test]
    fn or_instance_is_one_color() {
        let inst = or_instance(10);
        let coloring = color_edges(&inst).unwrap();
        assert_eq!(coloring.vertices(), 10);
        let first = EdgeColor {
            coordinate: 0,
            bit: false,
        };
        for p in 0..10 {
            for q in p + 1..10 {
                assert_eq!(coloring.color(p, q), first);
            }
        }
        assert_eq!(first.to_string(), "(1, 0)");
        assert_eq!(coloring.histogram(), vec![45, 0, 0, 0]);
    }

    #[test]
    fn or_extraction_even_parity() {
        let ex = extract_threshold(&or_instance(10), 2).unwrap();
        assert_eq!(ex.coordinate, 0);
        assert_eq!(ex.clique.vertices, vec![0, 1, 2, 3, 4]);
        assert_eq!(ex.witness.points, vec![1, 3]);
        assert_eq!(ex.witness.hyps, vec![2, 4]);
    }

    #[test]
    fn not_extraction_odd_parity() {
        let inst = not_instance(7);
        let coloring = color_edges(&inst).unwrap();
        assert!(coloring.histogram()[1] == 21);
        for d in 1..=3 {
            let ex = extract_threshold(&inst, d).unwrap();
            assert!(ex.clique.color.bit);
            assert_eq!(ex.witness.len(), d);
        }
        let ex = extract_threshold(&inst, 2).unwrap();
        assert_eq!(ex.witness.points, vec![3, 1]);
        assert_eq!(ex.witness.hyps, vec![2, 0]);
    }

    #[test]
    fn missing_clique_reports_largest() {
        let inst = or_instance(4);
        match extract_threshold(&inst, 2) {
            Err(Error::NoClique { required, largest }) => {
                assert_eq!((required, largest), (5, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_point_instance() {
        let c = color_edges(&or_instance(2)).unwrap();
        assert_eq!(c.histogram().iter().sum::<usize>(), 1);
    }

    #[test]
    fn violations_are_located() {
        let mut inst = or_instance(4);
        inst.witnesses[2] = vec![1, 1];
        assert!(matches!(
            inst.validate(),
            Err(Error::StaircaseViolation { i: 2, j: 2 })
        ));
        assert!(matches!(
            color_edges(&inst),
            Err(Error::StaircaseViolation { .. })
        ));
    }

    #[test]
    fn clique_search_basics() {
        let mono = EdgeColoring::from_fn(5, 2, |_, _| EdgeColor::from_index(1)).unwrap();
        let found = find_mono_clique(&mono, 5).unwrap();
        assert_eq!(found.vertices, vec![0, 1, 2, 3, 4]);
        assert_eq!(found.color, EdgeColor::from_index(1));
        assert!(find_mono_clique(&mono, 6).is_none());
        // Pentagon and its complement: no monochromatic triangle in K_5.
        let pent = EdgeColoring::from_fn(5, 2, |p, q| {
            EdgeColor::from_index(((q - p) == 1 || (q - p) == 4) as usize)
        })
        .unwrap();
        assert!(find_mono_clique(&pent, 3).is_none());
        assert_eq!(largest_mono_clique(&pent), 2);
    }

    #[test]
    fn coloring_shape_checked() {
        assert!(EdgeColoring::new(3, 2, vec![EdgeColor::from_index(0); 2]).is_err());
        assert!(EdgeColoring::new(2, 2, vec![EdgeColor::from_index(3)]).is_err());
    }
}
