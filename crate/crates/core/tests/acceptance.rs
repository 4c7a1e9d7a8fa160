//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Integer quantities are compared exactly. Runtime ceilings are checked on
//! wall-clock time of each criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dimlab::constructions::{
    coordinate_thresholds, digit, monotone_disjunctions, projections_class, staircase_rule,
    tdim_lb_instance, thicket_gap_instance, thresholds_class,
};
use dimlab::dims::vcdim_with_witness;
use dimlab::random::{
    composed_staircase, planted_staircase, random_aggregator, random_class, random_point_tree,
};
use dimlab::{
    check_threshold_witness, color_edges, compose, extract_threshold, game_value, is_zero_cover,
    ldim, ldim_at_least, min_zero_cover, named_aggregator, product_cover, ramsey_bound, run_game,
    sauer_bound, shatters, tdim, thicket_count, Adversary, CoverMode, Error, HypothesisClass,
    LabeledTree, Limits, NamedRule, StaircaseInstance, TreeKind,
};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let elapsed = start.elapsed();
    if elapsed > limit {
        Err(format!(
            "took {:.1}s, limit {}s",
            elapsed.as_secs_f64(),
            limit.as_secs()
        ))
    } else {
        Ok(format!("{:.2}s", elapsed.as_secs_f64()))
    }
}

fn mask_class(m: usize, rows: &[u32]) -> HypothesisClass {
    HypothesisClass::from_fn(m, rows.len(), |h, x| (rows[h] >> x) & 1 == 1).unwrap()
}

fn all_classes(m: usize) -> Vec<HypothesisClass> {
    let functions = 1u32 << m;
    (1u64..1 << functions)
        .map(|set| {
            let rows: Vec<u32> = (0..functions).filter(|f| (set >> f) & 1 == 1).collect();
            mask_class(m, &rows)
        })
        .collect()
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - (n.max(1) - 1).leading_zeros()) as usize
}

fn gap_instance() -> Outcome {
    let start = Instant::now();
    let (class, tree) = thicket_gap_instance(3).map_err(|e| e.to_string())?;
    let rho = thicket_count(&class, &tree).map_err(|e| e.to_string())?;
    let cover = min_zero_cover(&class, &tree, CoverMode::Exact, &Limits::default())
        .map_err(|e| e.to_string())?;
    ensure!(rho == 1, "rho = {rho}, expected 1");
    ensure!(cover.cover.len() >= 4, "N0 = {} < 4", cover.cover.len());
    ensure!(
        is_zero_cover(&cover.cover, &class, &tree)
            .unwrap()
            .is_valid(),
        "minimum cover does not validate"
    );
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("rho = 1, N0 = {}, {t}", cover.cover.len()))
}

/// One Lemma-suite instance: the class, tree, and computed quantities.
struct CoverRecord {
    n: usize,
    rho: u64,
    n0: usize,
    sauer: BigUint,
    shattered: bool,
}

fn cover_record(class: &HypothesisClass, tree: &LabeledTree) -> CoverRecord {
    let limits = Limits::default();
    let (d, _) = ldim(class, &limits).unwrap();
    CoverRecord {
        n: tree.depth(),
        rho: thicket_count(class, tree).unwrap(),
        n0: min_zero_cover(class, tree, CoverMode::Exact, &limits)
            .unwrap()
            .cover
            .len(),
        sauer: sauer_bound(tree.depth() as u64, d as u64),
        shattered: shatters(class, tree).unwrap().is_some(),
    }
}

fn lemma_records() -> Vec<CoverRecord> {
    let mut records = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..400 {
        let m = 1 + i % 5;
        let n = 1 + (i / 5) % 3;
        let class = random_class(&mut rng, m, 8).unwrap();
        let tree = random_point_tree(&mut rng, n, m).unwrap();
        records.push(cover_record(&class, &tree));
    }
    for class in all_classes(2) {
        for nodes in 0..8u32 {
            let values = (0..3).map(|i| ((nodes >> i) & 1) as usize).collect();
            let tree = LabeledTree::new(2, TreeKind::Points, values).unwrap();
            records.push(cover_record(&class, &tree));
        }
    }
    records
}

fn lemma_suite(records: &[CoverRecord], start: Instant) -> Outcome {
    let violations = records
        .iter()
        .filter(|r| !(r.rho <= r.n0 as u64 && BigUint::from(r.n0) <= r.sauer))
        .count();
    ensure!(
        violations == 0,
        "{violations} violations of rho <= N0 <= sauer"
    );
    ensure!(
        records.len() >= 300 + 120,
        "only {} instances",
        records.len()
    );
    let t = within(start, Duration::from_secs(300))?;
    Ok(format!("{} instances, 0 violations, {t}", records.len()))
}

fn shattered_suite(records: &[CoverRecord]) -> Outcome {
    let shattered: Vec<&CoverRecord> = records.iter().filter(|r| r.shattered).collect();
    let violations = shattered.iter().filter(|r| r.n0 < 1 << r.n).count();
    ensure!(!shattered.is_empty(), "no shattered instances in the suite");
    ensure!(
        violations == 0,
        "{violations} shattered instances with N0 < 2^n"
    );
    Ok(format!(
        "{} shattered instances, 0 violations",
        shattered.len()
    ))
}

fn product_cover_suite() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    for i in 0..120 {
        let m = 2 + i % 4;
        let n = 1 + i % 3;
        let classes = [
            random_class(&mut rng, m, 6).unwrap(),
            random_class(&mut rng, m, 6).unwrap(),
        ];
        let g = random_aggregator(&mut rng, 2).unwrap();
        let tree = random_point_tree(&mut rng, n, m).unwrap();
        let covers: Vec<_> = classes
            .iter()
            .map(|c| {
                min_zero_cover(c, &tree, CoverMode::Exact, &limits)
                    .unwrap()
                    .cover
            })
            .collect();
        let w = product_cover(&g, &covers, &limits).map_err(|e| e.to_string())?;
        let composed = compose(&g, &classes, false, &limits).unwrap().class;
        ensure!(
            is_zero_cover(&w, &composed, &tree).unwrap().is_valid(),
            "instance {i}: product cover fails to cover the composition"
        );
        ensure!(
            w.len() <= covers[0].len() * covers[1].len(),
            "instance {i}: |W| = {} exceeds the product",
            w.len()
        );
        checked += 1;
    }
    Ok(format!("{checked} instances, 0 violations"))
}

fn disjunction_depth() -> Outcome {
    let start = Instant::now();
    let limits = Limits::default();
    let p = projections_class(8, &limits).map_err(|e| e.to_string())?;
    let (d, cert) = ldim(&p, &limits).map_err(|e| e.to_string())?;
    ensure!(d == 3, "ldim(projections(8)) = {d}");
    ensure!(cert.verify(&p), "projection certificate fails");
    let h = monotone_disjunctions(8, 2, &limits).map_err(|e| e.to_string())?;
    let cert = ldim_at_least(&h, 4, &limits)
        .map_err(|e| e.to_string())?
        .ok_or("no depth-4 tree for disjunctions")?;
    ensure!(
        cert.depth() == 4 && cert.verify(&h),
        "disjunction certificate fails"
    );
    let t = within(start, Duration::from_secs(300))?;
    Ok(format!(
        "ldim(projections) = 3, depth-4 certificate for 36 disjunctions, {t}"
    ))
}

fn lower_bound_instance(base: usize, k: usize) -> Outcome {
    let start = Instant::now();
    let limits = Limits::default();
    let j = thresholds_class(base).unwrap();
    let (classes, g) = tdim_lb_instance(&j, k, &limits).map_err(|e| e.to_string())?;
    for (idx, c) in classes[2 * k..].iter().enumerate() {
        let (t, w) = tdim(c, &limits).unwrap();
        ensure!(t <= 1, "indicator class {} has tdim {t}", idx + 1);
        ensure!(
            check_threshold_witness(c, &w).unwrap().is_valid(),
            "bad witness"
        );
    }
    let composed = compose(&g, &classes, false, &limits)
        .map_err(|e| e.to_string())?
        .class;
    let (t, w) = tdim(&composed, &limits).map_err(|e| e.to_string())?;
    let target = base.pow(k as u32);
    ensure!(t == target, "composed tdim {t}, expected {target}");
    ensure!(
        check_threshold_witness(&composed, &w).unwrap().is_valid(),
        "composed witness fails"
    );
    for jdx in 0..k {
        ensure!(
            coordinate_thresholds(base, k, jdx, &limits)
                .unwrap()
                .is_subset_of(
                    &compose(
                        &named_aggregator(NamedRule::Or, 2).unwrap(),
                        &[classes[jdx].clone(), classes[k + jdx].clone()],
                        false,
                        &limits
                    )
                    .unwrap()
                    .class
                ),
            "coordinate thresholds missing from pairwise ORs"
        );
    }
    for a in 0..target {
        for x in 0..target {
            let y: Vec<bool> = (0..k)
                .map(|i| digit(a, i, base, k) >= digit(x, i, base, k))
                .collect();
            let z: Vec<bool> = (0..k)
                .map(|i| digit(x, i, base, k) == digit(a, i, base, k))
                .collect();
            ensure!(
                staircase_rule(&y, &z) == (a >= x),
                "identity fails at a = {a}, x = {x}"
            );
        }
    }
    let time = within(start, Duration::from_secs(60))?;
    Ok(format!("D = {base}: tdim = {t}, {time}"))
}

fn staircase_suite() -> Outcome {
    let limits = Limits::default();
    let th = thresholds_class(10).unwrap();
    let or = named_aggregator(NamedRule::Or, 2).unwrap();
    let base = StaircaseInstance::new(
        (0..10).collect(),
        (0..10).map(|i| vec![i, i]).collect(),
        vec![th.clone(), th],
        or,
    )
    .unwrap();
    let ex = extract_threshold(&base, 2).map_err(|e| e.to_string())?;
    ensure!(
        ex.coordinate == 0 && ex.witness.len() == 2,
        "threshold/OR extraction wrong"
    );
    ensure!(
        ex.coloring.histogram()[0] == 45,
        "threshold/OR edges not all (1, 0)"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut instances = Vec::new();
    for i in 0..60 {
        let n = 5 + i % 6;
        let k = 1 + i % 3;
        instances.push(planted_staircase(&mut rng, n, k, i % 2 == 1).unwrap().0);
    }
    let mut attempts = 0;
    while instances.len() < 80 && attempts < 500 {
        attempts += 1;
        if let Some(inst) = composed_staircase(&mut rng, 2, 5, 6, 3, &limits).unwrap() {
            instances.push(inst);
        }
    }
    let mut extractions = 0;
    let mut parities = [0usize; 2];
    for (i, inst) in instances.iter().enumerate() {
        let c = color_edges(inst).map_err(|e| format!("instance {i}: {e}"))?;
        let n = inst.len();
        ensure!(
            c.histogram().iter().sum::<usize>() == n * (n - 1) / 2,
            "instance {i}: not every pair colored"
        );
        for d in 1..=(n.saturating_sub(1)) / 2 {
            match extract_threshold(inst, d) {
                Ok(ex) => {
                    ensure!(
                        ex.witness.len() == d,
                        "instance {i}: witness length {}",
                        ex.witness.len()
                    );
                    let valid = check_threshold_witness(&inst.classes[ex.coordinate], &ex.witness)
                        .unwrap()
                        .is_valid();
                    ensure!(valid, "instance {i}, d = {d}: witness rejected");
                    parities[ex.clique.color.bit as usize] += 1;
                    extractions += 1;
                }
                Err(Error::NoClique { .. }) => {}
                Err(e) => return Err(format!("instance {i}, d = {d}: {e}")),
            }
        }
    }
    ensure!(instances.len() >= 50, "only {} instances", instances.len());
    ensure!(
        parities[0] > 0 && parities[1] > 0,
        "parities seen: {parities:?}"
    );
    Ok(format!(
        "{} instances, {extractions} extractions (y=0: {}, y=1: {}), 0 failures",
        instances.len() + 1,
        parities[0],
        parities[1]
    ))
}

fn ramsey_values() -> Outcome {
    for (k, d, want) in [(1, 1, 64u64), (1, 2, 1024), (2, 1, 16_777_216)] {
        let got = ramsey_bound(k, d);
        ensure!(got == BigUint::from(want), "ramsey_bound({k}, {d}) = {got}");
    }
    let big = ramsey_bound(10, 10);
    ensure!(
        big == BigUint::from(20u32).pow(420),
        "ramsey_bound(10, 10) wrong"
    );
    Ok(format!(
        "64, 1024, 16777216; (10, 10) has {} digits",
        big.to_string().len()
    ))
}

fn game_suite() -> Outcome {
    let start = Instant::now();
    let limits = Limits::default();
    let classes = all_classes(3);
    ensure!(classes.len() == 255, "{} classes", classes.len());
    let orders: Vec<Vec<usize>> = {
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        while let Some(seq) = frontier.pop() {
            for x in 0..3 {
                if !seq.contains(&x) {
                    let mut next: Vec<usize> = seq.clone();
                    next.push(x);
                    out.push(next.clone());
                    frontier.push(next);
                }
            }
        }
        out
    };
    let mut games = 0;
    for (ci, c) in classes.iter().enumerate() {
        let (l, _) = ldim(c, &limits).unwrap();
        let v = game_value(c, &limits).unwrap();
        ensure!(v == l, "class {ci}: game value {v}, ldim {l}");
        for order in &orders {
            for f in 0..c.len() {
                let script = order.iter().map(|&x| (x, c.eval(f, x))).collect();
                let rec = run_game(c, &Adversary::Scripted(script), &limits).unwrap();
                ensure!(
                    rec.mistakes <= l,
                    "class {ci}: {} mistakes > ldim {l}",
                    rec.mistakes
                );
                games += 1;
            }
        }
    }
    let t = within(start, Duration::from_secs(300))?;
    Ok(format!("255 classes, {games} scripted games, {t}"))
}

fn sanity_suite() -> Outcome {
    let limits = Limits::default();
    for (ci, c) in all_classes(3).iter().enumerate() {
        let (l, cert) = ldim(c, &limits).unwrap();
        let (v, points) = vcdim_with_witness(c, &limits).unwrap();
        let (_, w) = tdim(c, &limits).unwrap();
        ensure!(
            v <= l && l <= ceil_log2(c.len()),
            "class {ci}: vc {v}, ldim {l}, |F| {}",
            c.len()
        );
        ensure!(cert.verify(c), "class {ci}: ldim certificate fails");
        ensure!(
            dimlab::dims::is_shattered(c, &points),
            "class {ci}: vc witness fails"
        );
        ensure!(
            check_threshold_witness(c, &w).unwrap().is_valid(),
            "class {ci}: tdim witness fails"
        );
    }
    for d in 1..=8 {
        let th = thresholds_class(d).unwrap();
        let (t, w) = tdim(&th, &limits).unwrap();
        ensure!(t == d, "tdim(thresholds({d})) = {t}");
        ensure!(
            check_threshold_witness(&th, &w).unwrap().is_valid(),
            "thresholds({d}) witness fails"
        );
    }
    Ok("255 classes and thresholds D = 1..8 re-validated".into())
}

type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|_| {}));
    let lemma_start = Instant::now();
    let records = catch_unwind(lemma_records).ok();
    let criteria: Vec<Criterion> = vec![
        (
            "gap instance n = 3: rho = 1, exact N0 >= 4",
            Box::new(gap_instance),
        ),
        (
            "rho <= N0 <= sauer over random and exhaustive instances",
            Box::new(|| match &records {
                Some(r) => lemma_suite(r, lemma_start),
                None => Err("instance generation panicked".into()),
            }),
        ),
        (
            "shattered trees need covers of size >= 2^n",
            Box::new(|| match &records {
                Some(r) => shattered_suite(r),
                None => Err("instance generation panicked".into()),
            }),
        ),
        (
            "product covers cover compositions",
            Box::new(product_cover_suite),
        ),
        (
            "projections and disjunctions on D = 8, k = 2",
            Box::new(disjunction_depth),
        ),
        (
            "threshold lower-bound instance, D = 2 and D = 3, k = 2",
            Box::new(|| {
                let a = lower_bound_instance(2, 2)?;
                let b = lower_bound_instance(3, 2)?;
                Ok(format!("{a}; {b}"))
            }),
        ),
        (
            "coloring and extraction on staircase instances",
            Box::new(staircase_suite),
        ),
        ("ramsey bound values", Box::new(ramsey_values)),
        (
            "game value and SOA against ldim on 3 points",
            Box::new(game_suite),
        ),
        (
            "dimension sanity and certificate re-validation",
            Box::new(sanity_suite),
        ),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
