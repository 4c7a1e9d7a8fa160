mod common;

use common::{class_strategy, mask_class};
use dimlab::{
    compose, named_aggregator, restrict, BooleanAggregator, HypothesisClass, Limits, NamedRule,
};
use proptest::prelude::*;

fn same_domain_pair() -> impl Strategy<Value = (HypothesisClass, HypothesisClass)> {
    (1usize..=5).prop_flat_map(|m| {
        let rows = || proptest::collection::vec(0u32..(1 << m), 1..=5);
        (rows(), rows()).prop_map(move |(a, b)| (mask_class(m, &a), mask_class(m, &b)))
    })
}

proptest! {
    #[test]
    fn restriction_partitions_the_class(c in class_strategy(5, 10), x in 0usize..5) {
        let x = x % c.domain_size();
        let zero = restrict(&c, x, false);
        let one = restrict(&c, x, true);
        let sizes = [&zero, &one]
            .iter()
            .map(|r| r.as_ref().map_or(0, |r| r.len()))
            .sum::<usize>();
        prop_assert_eq!(sizes, c.len());
        for (part, bit) in [(zero, false), (one, true)] {
            if let Ok(part) = part {
                prop_assert!(part.is_subset_of(&c));
                for h in 0..part.len() {
                    prop_assert_eq!(part.eval(h, x), bit);
                }
            }
        }
    }

    #[test]
    fn composition_size_and_witnesses(
        (a, b) in same_domain_pair(),
        table in 0u32..16,
    ) {
        let bits: String = (0..4).map(|i| if (table >> (3 - i)) & 1 == 1 { '1' } else { '0' }).collect();
        let g = BooleanAggregator::from_bitstring(2, &bits).unwrap();
        let classes = [a.clone(), b.clone()];
        let comp = compose(&g, &classes, true, &Limits::default()).unwrap();
        prop_assert!(comp.class.len() <= a.len() * b.len());
        prop_assert_eq!(comp.tuples, (a.len() * b.len()) as u64);
        let witness = comp.witness.unwrap();
        prop_assert!(witness.verify(&g, &classes, &comp.class).is_ok());
        // Brute force: every tuple lands in the composed class.
        for i in 0..a.len() {
            for j in 0..b.len() {
                let row = HypothesisClass::from_fn(a.domain_size(), 1, |_, x| {
                    g.eval(&[a.eval(i, x), b.eval(j, x)]).unwrap()
                }).unwrap();
                prop_assert!(row.is_subset_of(&comp.class));
            }
        }
    }

    #[test]
    fn identity_composition_is_a_noop(c in class_strategy(5, 8)) {
        let id = named_aggregator(NamedRule::Identity, 1).unwrap();
        let comp = compose(&id, std::slice::from_ref(&c), false, &Limits::default()).unwrap();
        prop_assert_eq!(comp.class, c);
    }
}
