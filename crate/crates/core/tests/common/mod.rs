#![allow(dead_code)]

use dimlab::{HypothesisClass, LabeledTree, TreeKind};
use proptest::prelude::*;

/// Classes on 1..=max_m points with 1..=max_f rows given as bit masks.
pub fn class_strategy(max_m: usize, max_f: usize) -> impl Strategy<Value = HypothesisClass> {
    (1..=max_m).prop_flat_map(move |m| {
        proptest::collection::vec(0u32..(1 << m), 1..=max_f)
            .prop_map(move |rows| mask_class(m, &rows))
    })
}

pub fn mask_class(m: usize, rows: &[u32]) -> HypothesisClass {
    HypothesisClass::from_fn(m, rows.len(), |h, x| (rows[h] >> x) & 1 == 1).unwrap()
}

/// A class together with a point tree of depth 1..=max_n over its domain.
pub fn class_and_tree(
    max_m: usize,
    max_f: usize,
    max_n: usize,
) -> impl Strategy<Value = (HypothesisClass, LabeledTree)> {
    (class_strategy(max_m, max_f), 1..=max_n).prop_flat_map(|(c, n)| {
        let m = c.domain_size();
        proptest::collection::vec(0..m, (1usize << n) - 1).prop_map(move |values| {
            (
                c.clone(),
                LabeledTree::new(n, TreeKind::Points, values).unwrap(),
            )
        })
    })
}

/// Every nonempty class on `m` points, as row-mask sets.
pub fn all_classes(m: usize) -> Vec<HypothesisClass> {
    let functions = 1u32 << m;
    (1u64..1 << functions)
        .map(|set| {
            let rows: Vec<u32> = (0..functions).filter(|f| (set >> f) & 1 == 1).collect();
            mask_class(m, &rows)
        })
        .collect()
}

pub fn ceil_log2(n: usize) -> usize {
    (usize::BITS - (n.max(1) - 1).leading_zeros()) as usize
}
