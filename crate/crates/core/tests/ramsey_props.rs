use dimlab::constructions::thresholds_class;
use dimlab::ramsey::largest_mono_clique;
use dimlab::random::{composed_staircase, planted_staircase};
use dimlab::{
    check_threshold_witness, color_edges, extract_threshold, find_mono_clique, ramsey_bound, tdim,
    EdgeColor, EdgeColoring, Error, Limits,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coloring(n: usize, palette: usize, colors: &[usize]) -> EdgeColoring {
    let mut it = colors.iter();
    EdgeColoring::from_fn(n, palette, |_, _| {
        EdgeColor::from_index(*it.next().unwrap() % palette)
    })
    .unwrap()
}

proptest! {
    #[test]
    fn every_two_coloring_of_k6_has_a_triangle(colors in proptest::collection::vec(0usize..2, 15)) {
        let c = coloring(6, 2, &colors);
        let clique = find_mono_clique(&c, 3).unwrap();
        prop_assert!(c.is_monochromatic(&clique.vertices));
        prop_assert!(clique.vertices.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn clique_answers_self_validate(colors in proptest::collection::vec(0usize..4, 66)) {
        let c = coloring(12, 4, &colors);
        let largest = largest_mono_clique(&c);
        prop_assert!(largest >= 2);
        let found = find_mono_clique(&c, largest).unwrap();
        prop_assert!(c.is_monochromatic(&found.vertices));
        prop_assert_eq!(found.vertices.len(), largest);
        for v in 0..found.vertices.len() {
            for w in v + 1..found.vertices.len() {
                prop_assert_eq!(c.color(found.vertices[v], found.vertices[w]), found.color);
            }
        }
        prop_assert!(find_mono_clique(&c, largest + 1).is_none());
    }

    #[test]
    fn bound_is_monotone(k in 1u32..6, d in 1u32..6, dk in 0u32..3, dd in 0u32..3) {
        prop_assert!(ramsey_bound(k + dk, d + dd) >= ramsey_bound(k, d));
    }

    #[test]
    fn planted_extraction_validates(seed in any::<u64>(), n in 3usize..10, k in 1usize..4, flip in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (inst, _) = planted_staircase(&mut rng, n, k, flip).unwrap();
        let c = color_edges(&inst).unwrap();
        prop_assert_eq!(c.histogram().iter().sum::<usize>(), n * (n - 1) / 2);
        for d in 1..=(n - 1) / 2 {
            match extract_threshold(&inst, d) {
                Ok(ex) => {
                    prop_assert_eq!(ex.witness.len(), d);
                    let class = &inst.classes[ex.coordinate];
                    prop_assert!(check_threshold_witness(class, &ex.witness).unwrap().is_valid());
                    let (t, _) = tdim(class, &Limits::default()).unwrap();
                    prop_assert!(d <= t);
                }
                Err(Error::NoClique { required, largest }) => {
                    prop_assert_eq!(required, 2 * d + 1);
                    prop_assert!(largest < required);
                }
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}

#[test]
fn composed_extraction_never_beats_constituents() {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..200 {
        let Some(inst) = composed_staircase(&mut rng, 2, 5, 6, 3, &limits).unwrap() else {
            continue;
        };
        let max_t = inst
            .classes
            .iter()
            .map(|c| tdim(c, &limits).unwrap().0)
            .max()
            .unwrap();
        let c = color_edges(&inst).unwrap();
        assert!(find_mono_clique(&c, 2 * (max_t + 1) + 1).is_none());
        if let Ok(ex) = extract_threshold(&inst, 1) {
            assert!(ex.witness.len() <= max_t);
        }
        checked += 1;
    }
    assert!(
        checked >= 10,
        "only {checked} instances with a length-3 witness"
    );
}

#[test]
fn threshold_or_instance_end_to_end() {
    let th = thresholds_class(10).unwrap();
    let or = dimlab::named_aggregator(dimlab::NamedRule::Or, 2).unwrap();
    let inst = dimlab::StaircaseInstance::new(
        (0..10).collect(),
        (0..10).map(|i| vec![i, i]).collect(),
        vec![th.clone(), th],
        or,
    )
    .unwrap();
    let ex = extract_threshold(&inst, 2).unwrap();
    assert_eq!(ex.coordinate, 0);
    assert_eq!(ex.witness.len(), 2);
    assert_eq!(ex.coloring.histogram()[0], 45);
}
