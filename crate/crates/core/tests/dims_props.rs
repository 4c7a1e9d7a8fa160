mod common;

use common::{ceil_log2, class_strategy};
use dimlab::dims::{is_shattered, vcdim_with_witness};
use dimlab::{
    check_threshold_witness, game_value, ldim, ldim_at_least, run_game, shatters, tdim, vcdim,
    Adversary, HypothesisClass, Limits,
};
use fixedbitset::FixedBitSet;
use proptest::prelude::*;

fn subclass_of(c: &HypothesisClass, keep: u32) -> HypothesisClass {
    let mut members = FixedBitSet::with_capacity(c.len());
    for h in 0..c.len() {
        members.set(h, (keep >> (h % 32)) & 1 == 1);
    }
    if members.is_clear() {
        members.insert(0);
    }
    c.subclass(&members)
}

/// Threshold dimension by brute force over ordered point and hypothesis lists.
fn tdim_oracle(c: &HypothesisClass) -> usize {
    fn extend(
        c: &HypothesisClass,
        points: &mut Vec<usize>,
        hyps: &mut Vec<usize>,
        best: &mut usize,
    ) {
        *best = (*best).max(points.len());
        for x in 0..c.domain_size() {
            if points.contains(&x) {
                continue;
            }
            for f in 0..c.len() {
                if hyps.contains(&f) {
                    continue;
                }
                // Appending (x, f) as the new last pair: earlier hypotheses
                // must be 0 on x, and f must be 1 on every point.
                let ok = hyps.iter().all(|&g| !c.eval(g, x))
                    && points.iter().all(|&p| c.eval(f, p))
                    && c.eval(f, x);
                if ok {
                    points.push(x);
                    hyps.push(f);
                    extend(c, points, hyps, best);
                    points.pop();
                    hyps.pop();
                }
            }
        }
    }
    let mut best = 0;
    extend(c, &mut Vec::new(), &mut Vec::new(), &mut best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dimension_chain(c in class_strategy(5, 12)) {
        let limits = Limits::default();
        let (l, cert) = ldim(&c, &limits).unwrap();
        let (v, points) = vcdim_with_witness(&c, &limits).unwrap();
        prop_assert!(cert.verify(&c));
        prop_assert_eq!(cert.depth(), l);
        prop_assert!(is_shattered(&c, &points));
        prop_assert_eq!(points.len(), v);
        prop_assert!(v <= l);
        prop_assert!(l <= ceil_log2(c.len()));
        prop_assert!(ldim_at_least(&c, l + 1, &limits).unwrap().is_none());
    }

    #[test]
    fn threshold_dimension_matches_brute_force(c in class_strategy(4, 6)) {
        let (t, w) = tdim(&c, &Limits::default()).unwrap();
        prop_assert!(check_threshold_witness(&c, &w).unwrap().is_valid());
        prop_assert_eq!(w.len(), t);
        prop_assert_eq!(t, tdim_oracle(&c));
    }

    #[test]
    fn dimensions_are_monotone(c in class_strategy(5, 10), keep in any::<u32>()) {
        let limits = Limits::default();
        let sub = subclass_of(&c, keep);
        prop_assert!(ldim(&sub, &limits).unwrap().0 <= ldim(&c, &limits).unwrap().0);
        prop_assert!(tdim(&sub, &limits).unwrap().0 <= tdim(&c, &limits).unwrap().0);
        prop_assert!(vcdim(&sub, &limits).unwrap() <= vcdim(&c, &limits).unwrap());
    }

    #[test]
    fn game_agrees_with_ldim(c in class_strategy(5, 10)) {
        let limits = Limits::default();
        let (l, cert) = ldim(&c, &limits).unwrap();
        prop_assert_eq!(game_value(&c, &limits).unwrap(), l);
        let rec = run_game(&c, &Adversary::Optimal, &limits).unwrap();
        prop_assert_eq!(rec.mistakes, l);
        prop_assert!(shatters(&c, &cert.tree).unwrap().is_some());
    }

    #[test]
    fn soa_mistakes_bounded(c in class_strategy(5, 10), target in 0usize..10, order in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let limits = Limits::default();
        let target = target % c.len();
        let script: Vec<(usize, bool)> = order
            .into_iter()
            .filter(|&x| x < c.domain_size())
            .map(|x| (x, c.eval(target, x)))
            .collect();
        let rec = run_game(&c, &Adversary::Scripted(script), &limits).unwrap();
        prop_assert!(rec.mistakes <= ldim(&c, &limits).unwrap().0);
        let sizes: Vec<usize> = rec.rounds.iter().map(|r| r.version_space).collect();
        prop_assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(sizes.iter().all(|&s| s >= 1));
    }
}
