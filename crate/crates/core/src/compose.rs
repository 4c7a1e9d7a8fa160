//! Pointwise composition `G(H_1, ..., H_k)`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::aggregator::BooleanAggregator;
use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// One constituent tuple per composed hypothesis: `tuples[h][l]` is the index
/// in `H_l` of the `l`-th constituent of composed hypothesis `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionWitness {
    tuples: Vec<Vec<usize>>,
}

impl CompositionWitness {
    pub fn new(tuples: Vec<Vec<usize>>) -> Self {
        CompositionWitness { tuples }
    }

    pub fn tuple(&self, h: usize) -> &[usize] {
        &self.tuples[h]
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Re-evaluates every tuple through `g` and compares with the composed
    /// class bit for bit. Returns the first composed hypothesis that fails.
    pub fn verify(
        &self,
        g: &BooleanAggregator,
        classes: &[HypothesisClass],
        composed: &HypothesisClass,
    ) -> Result<(), usize> {
        if self.tuples.len() != composed.len() {
            return Err(self.tuples.len().min(composed.len()));
        }
        let mut inputs = vec![false; g.arity()];
        for (h, tuple) in self.tuples.iter().enumerate() {
            if tuple.len() != classes.len() || tuple.len() != g.arity() {
                return Err(h);
            }
            if tuple.iter().zip(classes).any(|(&i, c)| i >= c.len()) {
                return Err(h);
            }
            for x in 0..composed.domain_size() {
                for (l, (&i, class)) in tuple.iter().zip(classes).enumerate() {
                    inputs[l] = class.eval(i, x);
                }
                if g.eval(&inputs).ok() != Some(composed.eval(h, x)) {
                    return Err(h);
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Composition {
    pub class: HypothesisClass,
    pub witness: Option<CompositionWitness>,
    /// Number of constituent tuples evaluated.
    pub tuples: u64,
}

/// Computes `G(H_1, ..., H_k)` by enumerating every tuple in lexicographic
/// order of constituent indices, keeping the first tuple that produces each
/// distinct composed hypothesis.
pub fn compose(
    g: &BooleanAggregator,
    classes: &[HypothesisClass],
    keep_witnesses: bool,
    limits: &Limits,
) -> Result<Composition> {
    let k = g.arity();
    if classes.len() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            found: classes.len(),
        });
    }
    let m = classes[0].domain_size();
    for c in classes {
        if c.domain_size() != m {
            return Err(Error::DomainMismatch {
                expected: m,
                found: c.domain_size(),
            });
        }
        if c.is_empty() {
            return Err(Error::EmptyClass);
        }
    }
    let total = classes
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64));
    match total {
        Some(t) if t <= limits.max_tuples => {}
        _ => {
            let required = classes
                .iter()
                .map(|c| c.len().to_string())
                .collect::<Vec<_>>()
                .join(" x ");
            return Err(Error::budget(
                "composition tuples",
                required,
                limits.max_tuples,
            ));
        }
    }

    // partial[l][x] holds the table-index prefix contributed by classes 0..l.
    let mut partial = vec![vec![0usize; m]; k + 1];
    let mut idx = vec![0usize; k];
    let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut rows = Vec::new();
    let mut tuples = Vec::new();
    let mut count = 0u64;
    let mut dirty = 0;
    loop {
        for l in dirty..k {
            let (head, tail) = partial.split_at_mut(l + 1);
            let prev = &head[l];
            let next = &mut tail[0];
            let class = &classes[l];
            for x in 0..m {
                next[x] = (prev[x] << 1) | class.eval(idx[l], x) as usize;
            }
        }
        count += 1;
        let mut row = FixedBitSet::with_capacity(m);
        for (x, &index) in partial[k].iter().enumerate() {
            if g.eval_index(index) {
                row.insert(x);
            }
        }
        if !seen.contains_key(&row) {
            seen.insert(row.clone(), rows.len());
            rows.push(row);
            if keep_witnesses {
                tuples.push(idx.clone());
            }
        }

        // Odometer: last coordinate moves fastest.
        let mut l = k;
        loop {
            if l == 0 {
                let class = HypothesisClass::new(m, rows)?;
                return Ok(Composition {
                    class,
                    witness: keep_witnesses.then(|| CompositionWitness::new(tuples)),
                    tuples: count,
                });
            }
            l -= 1;
            idx[l] += 1;
            if idx[l] < classes[l].len() {
                break;
            }
            idx[l] = 0;
        }
        dirty = l;
    }
}
