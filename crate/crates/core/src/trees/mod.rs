//! Complete binary trees labeled by domain points or bits.
//!
//! The node reached by the sign prefix `e_1 .. e_{t-1}` lives at heap index
//! `2^(t-1) - 1 + offset`, where `offset` reads the prefix as a binary number
//! with `-1 -> 0`, `+1 -> 1` and `e_1` most significant. Sign sequences are
//! carried around as integers in that same encoding.

mod cover;
mod exact;

pub use cover::{
    canonical_cover, is_zero_cover, min_zero_cover, product_cover, sauer_bound, CoverCheck,
    CoverMode, CoverSet, MinCover, PathStrings,
};

use fixedbitset::FixedBitSet;

use crate::class::HypothesisClass;
use crate::error::{Error, Result};

/// Deepest tree any routine will build; keeps sign paths inside a `u64`.
pub const MAX_DEPTH: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeKind {
    Points,
    Bits,
}

impl TreeKind {
    pub fn name(self) -> &'static str {
        match self {
            TreeKind::Points => "points",
            TreeKind::Bits => "bits",
        }
    }
}

/// Heap index of the level-`level` node (1-based) reached by `prefix`.
#[inline]
pub fn node_index(level: usize, prefix: u64) -> usize {
    (1usize << (level - 1)) - 1 + prefix as usize
}

/// Expands an encoded sign sequence of length `len` into `-1`/`+1` values.
pub fn signs(encoded: u64, len: usize) -> Vec<i8> {
    (0..len)
        .map(|t| {
            if (encoded >> (len - 1 - t)) & 1 == 1 {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// Inverse of [`signs`].
pub fn encode_signs(signs: &[i8]) -> u64 {
    signs.iter().fold(0, |acc, &s| (acc << 1) | (s > 0) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    depth: usize,
    kind: TreeKind,
    values: Vec<usize>,
}

impl LabeledTree {
    /// A depth-0 tree has no nodes; it only shows up as the certificate of a
    /// zero-dimensional class.
    pub fn new(depth: usize, kind: TreeKind, values: Vec<usize>) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::input(format!(
                "tree depth {depth} exceeds {MAX_DEPTH}"
            )));
        }
        let expected = (1usize << depth) - 1;
        if values.len() != expected {
            return Err(Error::input(format!(
                "a depth-{depth} tree has {expected} nodes, got {}",
                values.len()
            )));
        }
        if kind == TreeKind::Bits {
            if let Some(v) = values.iter().find(|&&v| v > 1) {
                return Err(Error::input(format!("bit tree contains value {v}")));
            }
        }
        Ok(LabeledTree {
            depth,
            kind,
            values,
        })
    }

    pub fn points(depth: usize, values: Vec<usize>) -> Result<Self> {
        Self::new(depth, TreeKind::Points, values)
    }

    pub fn bits(depth: usize, values: Vec<usize>) -> Result<Self> {
        Self::new(depth, TreeKind::Bits, values)
    }

    /// Builds a tree from `f(level, prefix)` with 1-based levels.
    pub fn from_fn(
        depth: usize,
        kind: TreeKind,
        mut f: impl FnMut(usize, u64) -> usize,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity((1usize << depth.min(MAX_DEPTH)) - 1);
        for level in 1..=depth.min(MAX_DEPTH) {
            for prefix in 0..1u64 << (level - 1) {
                values.push(f(level, prefix));
            }
        }
        Self::new(depth, kind, values)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn at(&self, level: usize, prefix: u64) -> usize {
        self.values[node_index(level, prefix)]
    }

    pub fn expect_kind(&self, kind: TreeKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::KindMismatch {
                expected: kind.name(),
                found: self.kind.name(),
            });
        }
        Ok(())
    }

    /// Checks that this is a point tree whose labels index into `class`.
    pub fn check_points(&self, class: &HypothesisClass) -> Result<()> {
        self.expect_kind(TreeKind::Points)?;
        for &x in &self.values {
            class.check_point(x)?;
        }
        Ok(())
    }
}

/// For every sign sequence `e` in `{-1,1}^n`, the lowest-index hypothesis `f`
/// with `f(x_t(e_{1:t-1})) = (e_t + 1) / 2` for all `t`, or `None`.
fn trace_patterns(class: &HypothesisClass, tree: &LabeledTree) -> Result<Vec<Option<usize>>> {
    tree.check_points(class)?;
    let n = tree.depth();
    let mut out = vec![None; 1 << n];
    let mut stack: Vec<(usize, u64, FixedBitSet)> = vec![(1, 0, class.all())];
    while let Some((level, prefix, vs)) = stack.pop() {
        if vs.is_clear() {
            continue;
        }
        if level > n {
            out[prefix as usize] = vs.ones().next();
            continue;
        }
        let x = tree.at(level, prefix);
        stack.push((level + 1, prefix << 1, class.split(&vs, x, false)));
        stack.push((level + 1, (prefix << 1) | 1, class.split(&vs, x, true)));
    }
    Ok(out)
}

/// Proof that a class shatters a point tree: one hypothesis per sign sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatterCertificate {
    depth: usize,
    hypotheses: Vec<usize>,
}

impl ShatterCertificate {
    pub fn new(depth: usize, hypotheses: Vec<usize>) -> Result<Self> {
        if depth > MAX_DEPTH || hypotheses.len() != 1 << depth {
            return Err(Error::input(format!(
                "a depth-{depth} certificate needs {} entries, got {}",
                1u64 << depth.min(63),
                hypotheses.len()
            )));
        }
        Ok(ShatterCertificate { depth, hypotheses })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Hypothesis index for the encoded sign sequence `e`.
    pub fn hypothesis(&self, e: u64) -> usize {
        self.hypotheses[e as usize]
    }

    pub fn hypotheses(&self) -> &[usize] {
        &self.hypotheses
    }

    /// Re-checks every entry against the class and tree.
    pub fn verify(&self, class: &HypothesisClass, tree: &LabeledTree) -> bool {
        if tree.kind() != TreeKind::Points || tree.depth() != self.depth {
            return false;
        }
        let n = self.depth;
        self.hypotheses.iter().enumerate().all(|(e, &f)| {
            f < class.len()
                && (1..=n).all(|t| {
                    let prefix = (e as u64) >> (n - t + 1);
                    let x = tree.at(t, prefix);
                    x < class.domain_size() && class.eval(f, x) == ((e >> (n - t)) & 1 == 1)
                })
        })
    }
}

/// Returns a certificate when every sign sequence is realized by the class.
pub fn shatters(class: &HypothesisClass, tree: &LabeledTree) -> Result<Option<ShatterCertificate>> {
    let traced = trace_patterns(class, tree)?;
    let hyps: Option<Vec<usize>> = traced.into_iter().collect();
    match hyps {
        Some(h) => Ok(Some(ShatterCertificate::new(tree.depth(), h)?)),
        None => Ok(None),
    }
}

/// Thicket shatter function: number of sign sequences admitting a solution.
pub fn thicket_count(class: &HypothesisClass, tree: &LabeledTree) -> Result<u64> {
    Ok(trace_patterns(class, tree)?
        .iter()
        .filter(|h| h.is_some())
        .count() as u64)
}
