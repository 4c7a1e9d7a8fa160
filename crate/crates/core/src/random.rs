//! Seeded random instances for property suites and the CLI.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::aggregator::BooleanAggregator;
use crate::class::HypothesisClass;
use crate::compose::compose;
use crate::dims::tdim;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::ramsey::StaircaseInstance;
use crate::trees::{LabeledTree, TreeKind};

fn random_row<R: Rng + ?Sized>(rng: &mut R, m: usize) -> FixedBitSet {
    let mut row = FixedBitSet::with_capacity(m);
    for x in 0..m {
        row.set(x, rng.gen());
    }
    row
}

/// Between 1 and `max_hypotheses` uniformly random rows on `m` points
/// (duplicates are dropped, so the class may come out smaller).
pub fn random_class<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    max_hypotheses: usize,
) -> Result<HypothesisClass> {
    if m == 0 || max_hypotheses == 0 {
        return Err(Error::input(
            "random classes need m >= 1 and at least one hypothesis",
        ));
    }
    let count = rng.gen_range(1..=max_hypotheses);
    HypothesisClass::new(m, (0..count).map(|_| random_row(rng, m)))
}

/// Point tree with every node drawn uniformly from `0..m`.
pub fn random_point_tree<R: Rng + ?Sized>(
    rng: &mut R,
    depth: usize,
    m: usize,
) -> Result<LabeledTree> {
    if m == 0 {
        return Err(Error::input("random trees need m >= 1"));
    }
    LabeledTree::from_fn(depth, TreeKind::Points, |_, _| rng.gen_range(0..m))
}

pub fn random_aggregator<R: Rng + ?Sized>(rng: &mut R, arity: usize) -> Result<BooleanAggregator> {
    BooleanAggregator::from_fn(arity, |_| rng.gen())
}

/// A valid staircase instance with `n` points: coordinate `t` carries
/// `h_i(x_j) = 1[i >= j] XOR flip` and the rule is `y_t XOR flip`; every other
/// coordinate carries random hypotheses. Returns the instance and `t`.
pub fn planted_staircase<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    flip: bool,
) -> Result<(StaircaseInstance, usize)> {
    if n == 0 || k == 0 {
        return Err(Error::input("planted instances need n >= 1 and k >= 1"));
    }
    let m = n + rng.gen_range(0..=2);
    let mut domain: Vec<usize> = (0..m).collect();
    domain.shuffle(rng);
    let points: Vec<usize> = domain[..n].to_vec();
    let t = rng.gen_range(0..k);

    let mut classes = Vec::with_capacity(k);
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(k);
    for l in 0..k {
        let rows: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut row = random_row(rng, m);
                if l == t {
                    for (j, &x) in points.iter().enumerate() {
                        row.set(x, (i >= j) != flip);
                    }
                }
                row
            })
            .collect();
        let class = HypothesisClass::new(m, rows.iter().cloned())?;
        columns.push(
            rows.iter()
                .map(|r| class.position(r).expect("row was inserted"))
                .collect(),
        );
        classes.push(class);
    }
    let witnesses = (0..n)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let g = BooleanAggregator::from_fn(k, |y| y[t] != flip)?;
    Ok((StaircaseInstance::new(points, witnesses, classes, g)?, t))
}

/// Composes `k` random classes under a random rule and reads a staircase
/// instance off a maximum threshold witness of the result. `None` when that
/// witness is shorter than `min_len`.
pub fn composed_staircase<R: Rng + ?Sized>(
    rng: &mut R,
    k: usize,
    m: usize,
    max_hypotheses: usize,
    min_len: usize,
    limits: &Limits,
) -> Result<Option<StaircaseInstance>> {
    let classes = (0..k)
        .map(|_| random_class(rng, m, max_hypotheses))
        .collect::<Result<Vec<_>>>()?;
    let g = random_aggregator(rng, k)?;
    let composition = compose(&g, &classes, true, limits)?;
    let (d, witness) = tdim(&composition.class, limits)?;
    if d < min_len {
        return Ok(None);
    }
    let tuples = composition.witness.expect("witnesses were requested");
    StaircaseInstance::from_composition(&g, &classes, &tuples, &witness).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramsey::{color_edges, extract_threshold};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_class(&mut ChaCha8Rng::seed_from_u64(7), 5, 8).unwrap();
        let b = random_class(&mut ChaCha8Rng::seed_from_u64(7), 5, 8).unwrap();
        assert_eq!(a, b);
        assert!(a.len() <= 8 && a.domain_size() == 5);
    }

    #[test]
    fn planted_instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for round in 0..20 {
            let flip = round % 2 == 1;
            let (inst, _) = planted_staircase(&mut rng, 7, 3, flip).unwrap();
            inst.validate().unwrap();
            let coloring = color_edges(&inst).unwrap();
            assert_eq!(coloring.histogram().iter().sum::<usize>(), 21);
            if let Ok(ex) = extract_threshold(&inst, 2) {
                assert_eq!(ex.witness.len(), 2);
            }
        }
    }

    #[test]
    fn composed_instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut found = 0;
        for _ in 0..30 {
            if let Some(inst) =
                composed_staircase(&mut rng, 2, 5, 6, 2, &Limits::default()).unwrap()
            {
                inst.validate().unwrap();
                found += 1;
            }
        }
        assert!(found > 0);
    }
}
