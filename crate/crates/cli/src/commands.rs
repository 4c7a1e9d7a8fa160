use std::fs;
use std::path::{Path, PathBuf};

use dimlab::bounds::{check_ldim_closure, check_sauer, check_tdim_closure, check_thicket};
use dimlab::constructions::{
    coordinate_thresholds, monotone_disjunctions, or_closure_has_thresholds, projections_class,
    search_small_j, staircase_aggregators, tdim_lb_instance, thicket_gap_instance,
    thresholds_class, SmallJ,
};
use dimlab::dims::vcdim_with_witness;
use dimlab::io::{
    parse_json, read_aggregator, read_class, read_instance, read_tree, write_json, AggregatorFile,
    ClassFile, CoverFile, InstanceFile, TreeFile,
};
use dimlab::ramsey::largest_mono_clique;
use dimlab::random::{random_aggregator, random_class, random_point_tree};
use dimlab::trees::PathStrings;
use dimlab::{
    canonical_cover, color_edges, compose, extract_threshold, game_value, is_zero_cover, ldim,
    min_zero_cover, named_aggregator, run_game, shatters, tdim, thicket_count, Adversary,
    CoverMode, CoverSet, EdgeColor, Error, HypothesisClass, LabeledTree, Limits, NamedRule, Result,
    StaircaseInstance,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Bound, ClosureInputs, Command, Failure, Gen, Mode, TreeInputs, Which};

pub struct Context {
    pub limits: Limits,
    pub seed: u64,
}

enum Status {
    Ok,
    Fail,
    NotFound,
}

type Outcome = Result<(Value, Status)>;

pub fn run(ctx: &Context, cmd: &Command) -> (Option<Value>, std::result::Result<(), Failure>) {
    match dispatch(ctx, cmd) {
        Ok((v, Status::Ok)) => (Some(v), Ok(())),
        Ok((v, Status::Fail)) => (Some(v), Err(Failure::Property)),
        Ok((v, Status::NotFound)) => (Some(v), Err(Failure::NotFound)),
        Err(e) => (None, Err(Failure::Lib(e))),
    }
}

fn dispatch(ctx: &Context, cmd: &Command) -> Outcome {
    match cmd {
        Command::Dim { class, which } => dim(ctx, class, *which),
        Command::Compose {
            aggregator,
            classes,
            out,
        } => compose_cmd(ctx, aggregator, classes, out.as_deref()),
        Command::Cover {
            class,
            tree,
            mode,
            out,
        } => cover(ctx, class, tree, *mode, out.as_deref()),
        Command::Rho { class, tree } => rho(class, tree),
        Command::Gen { what, out_dir } => generate(ctx, what, out_dir),
        Command::VerifyBound { kind } => verify(ctx, kind),
        Command::Extract { instance, d } => extract(instance, *d),
        Command::Soa { class, script } => soa(ctx, class, script.as_deref()),
        Command::Report { class } => report(ctx, class),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data always serializes")
}

fn verdict(pass: bool) -> (&'static str, Status) {
    if pass {
        ("PASS", Status::Ok)
    } else {
        ("FAIL", Status::Fail)
    }
}

fn dimension_fields(
    ctx: &Context,
    class: &HypothesisClass,
    which: Which,
    out: &mut Value,
) -> Result<()> {
    if matches!(which, Which::Ldim | Which::All) {
        let (n, cert) = ldim(class, &ctx.limits)?;
        out["ldim"] = json!(n);
        out["ldim_certificate"] = json!({
            "tree": to_value(&TreeFile::from(&cert.tree)),
            "hypotheses": cert.certificate.hypotheses(),
            "valid": cert.verify(class),
        });
    }
    if matches!(which, Which::Tdim | Which::All) {
        let (n, w) = tdim(class, &ctx.limits)?;
        out["tdim"] = json!(n);
        out["tdim_witness"] = json!({
            "points": w.points,
            "hypotheses": w.hyps,
            "valid": dimlab::check_threshold_witness(class, &w)?.is_valid(),
        });
    }
    if matches!(which, Which::Vc | Which::All) {
        let (n, points) = vcdim_with_witness(class, &ctx.limits)?;
        out["vc"] = json!(n);
        out["vc_witness"] = json!(points);
    }
    Ok(())
}

fn dim(ctx: &Context, path: &Path, which: Which) -> Outcome {
    let class = read_class(path)?;
    let mut out = json!({
        "domain_size": class.domain_size(),
        "size": class.len(),
    });
    dimension_fields(ctx, &class, which, &mut out)?;
    Ok((out, Status::Ok))
}

fn compose_cmd(
    ctx: &Context,
    aggregator: &Path,
    classes: &[PathBuf],
    out: Option<&Path>,
) -> Outcome {
    let g = read_aggregator(aggregator)?;
    let classes = classes
        .iter()
        .map(|p| read_class(p))
        .collect::<Result<Vec<_>>>()?;
    let comp = compose(&g, &classes, true, &ctx.limits)?;
    if let Some(path) = out {
        write_json(path, &ClassFile::from(&comp.class))?;
    }
    let witnesses = comp.witness.as_ref().map(|w| w.tuples().to_vec());
    Ok((
        json!({
            "size": comp.class.len(),
            "tuples": comp.tuples,
            "class": to_value(&ClassFile::from(&comp.class)),
            "witnesses": witnesses,
        }),
        Status::Ok,
    ))
}

fn cover(ctx: &Context, class: &Path, tree: &Path, mode: Mode, out: Option<&Path>) -> Outcome {
    let class = read_class(class)?;
    let tree = read_tree(tree)?;
    let (set, lower_bound, exact) = match mode {
        Mode::Canonical => {
            let set = canonical_cover(&class, &tree)?;
            let lb = PathStrings::new(&class, &tree)?.lower_bound();
            (set, lb, false)
        }
        Mode::Greedy | Mode::Exact => {
            let m = if mode == Mode::Exact {
                CoverMode::Exact
            } else {
                CoverMode::Greedy
            };
            let r = min_zero_cover(&class, &tree, m, &ctx.limits)?;
            (r.cover, r.lower_bound, r.exact)
        }
    };
    let valid = is_zero_cover(&set, &class, &tree)?.is_valid();
    if let Some(path) = out {
        write_json(path, &CoverFile::from(&set))?;
    }
    let mode_name = match mode {
        Mode::Canonical => "canonical",
        Mode::Greedy => "greedy",
        Mode::Exact => "exact",
    };
    let (result, status) = verdict(valid);
    Ok((
        json!({
            "mode": mode_name,
            "size": set.len(),
            "lower_bound": lower_bound,
            "minimal": exact || set.len() == lower_bound,
            "valid": valid,
            "cover": to_value(&CoverFile::from(&set)),
            "result": result,
        }),
        status,
    ))
}

fn rho(class: &Path, tree: &Path) -> Outcome {
    let class = read_class(class)?;
    let tree = read_tree(tree)?;
    let rho = thicket_count(&class, &tree)?;
    let cert = shatters(&class, &tree)?;
    Ok((
        json!({
            "depth": tree.depth(),
            "rho": rho,
            "shattered": cert.is_some(),
            "certificate": cert.map(|c| c.hypotheses().to_vec()),
        }),
        Status::Ok,
    ))
}

fn write_class(
    dir: &Path,
    name: &str,
    class: &HypothesisClass,
    written: &mut Vec<String>,
) -> Result<()> {
    let path = dir.join(name);
    write_json(&path, &ClassFile::from(class))?;
    written.push(path.display().to_string());
    Ok(())
}

fn write_value<T: Serialize>(
    dir: &Path,
    name: &str,
    value: &T,
    written: &mut Vec<String>,
) -> Result<()> {
    let path = dir.join(name);
    write_json(&path, value)?;
    written.push(path.display().to_string());
    Ok(())
}

fn generate(ctx: &Context, what: &Gen, dir: &Path) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Error::input(format!("{}: {e}", dir.display())))?;
    let limits = &ctx.limits;
    let mut written = Vec::new();
    let mut summary = json!({});
    let mut status = Status::Ok;
    match what {
        Gen::Projections { d } => {
            let c = projections_class(*d, limits)?;
            summary["size"] = json!(c.len());
            write_class(dir, &format!("projections-{d}.json"), &c, &mut written)?;
        }
        Gen::Disjunctions { d, k } => {
            let c = monotone_disjunctions(*d, *k, limits)?;
            summary["size"] = json!(c.len());
            write_class(dir, &format!("disjunctions-{d}-{k}.json"), &c, &mut written)?;
        }
        Gen::Thresholds { d } => {
            let c = thresholds_class(*d)?;
            summary["size"] = json!(c.len());
            write_class(dir, &format!("thresholds-{d}.json"), &c, &mut written)?;
        }
        Gen::ThicketGap { n } => {
            let (c, t) = thicket_gap_instance(*n)?;
            summary["size"] = json!(c.len());
            write_class(
                dir,
                &format!("thicket-gap-{n}-class.json"),
                &c,
                &mut written,
            )?;
            write_value(
                dir,
                &format!("thicket-gap-{n}-tree.json"),
                &TreeFile::from(&t),
                &mut written,
            )?;
        }
        Gen::StaircaseAggregators { k } => {
            let (gt, g) = staircase_aggregators(*k, limits)?;
            write_value(
                dir,
                &format!("staircase-{k}-gtilde.json"),
                &AggregatorFile::from(&gt),
                &mut written,
            )?;
            write_value(
                dir,
                &format!("staircase-{k}-g.json"),
                &AggregatorFile::from(&g),
                &mut written,
            )?;
        }
        Gen::TdimLb { d, k, j } => {
            let inner = match j {
                Some(p) => read_class(p)?,
                None => thresholds_class(*d)?,
            };
            if inner.domain_size() != *d {
                return Err(Error::DomainMismatch {
                    expected: *d,
                    found: inner.domain_size(),
                });
            }
            let (classes, g) = tdim_lb_instance(&inner, *k, limits)?;
            for (i, c) in classes.iter().enumerate() {
                write_class(
                    dir,
                    &format!("tdim-lb-{d}-{k}-class-{:02}.json", i + 1),
                    c,
                    &mut written,
                )?;
            }
            write_value(
                dir,
                &format!("tdim-lb-{d}-{k}-aggregator.json"),
                &AggregatorFile::from(&g),
                &mut written,
            )?;
            summary["domain_size"] = json!(classes[0].domain_size());
        }
        Gen::CoordThresholds { d, k, j } => {
            if *j == 0 {
                return Err(Error::input("coordinates are numbered from 1"));
            }
            let c = coordinate_thresholds(*d, *k, j - 1, limits)?;
            write_class(
                dir,
                &format!("coord-thresholds-{d}-{k}-{j}.json"),
                &c,
                &mut written,
            )?;
        }
        Gen::SmallJ {
            d,
            tdim_budget,
            size_budget,
        } => match search_small_j(*d, *tdim_budget, *size_budget, limits)? {
            SmallJ::Found(c) => {
                summary["found"] = json!(true);
                summary["size"] = json!(c.len());
                summary["tdim"] = json!(tdim(&c, limits)?.0);
                summary["or_closure_has_thresholds"] = json!(or_closure_has_thresholds(&c));
                summary["hypotheses"] = json!(c.to_bitstrings());
                write_class(dir, &format!("small-j-{d}.json"), &c, &mut written)?;
            }
            SmallJ::Absent => {
                summary["found"] = json!(false);
                status = Status::NotFound;
            }
        },
        Gen::ThresholdOrInstance { n } => {
            let th = thresholds_class(*n)?;
            let or = named_aggregator(NamedRule::Or, 2)?;
            let inst = StaircaseInstance::new(
                (0..*n).collect(),
                (0..*n).map(|i| vec![i, i]).collect(),
                vec![th.clone(), th],
                or,
            )?;
            inst.validate()?;
            write_value(
                dir,
                &format!("threshold-or-{n}.json"),
                &InstanceFile::from_instance(&inst),
                &mut written,
            )?;
        }
    }
    summary["written"] = json!(written);
    Ok((summary, status))
}

fn read_closure_inputs(
    inputs: &ClosureInputs,
) -> Result<(dimlab::BooleanAggregator, Vec<HypothesisClass>)> {
    let g = read_aggregator(inputs.aggregator.as_ref().expect("clap enforces presence"))?;
    let classes = inputs
        .classes
        .iter()
        .map(|p| read_class(p))
        .collect::<Result<Vec<_>>>()?;
    Ok((g, classes))
}

fn random_closure_instance(
    rng: &mut ChaCha8Rng,
) -> Result<(dimlab::BooleanAggregator, Vec<HypothesisClass>)> {
    let m = rng.gen_range(2..=4);
    let classes = vec![random_class(rng, m, 6)?, random_class(rng, m, 6)?];
    Ok((random_aggregator(rng, 2)?, classes))
}

fn random_tree_instance(rng: &mut ChaCha8Rng) -> Result<(HypothesisClass, LabeledTree)> {
    let m = rng.gen_range(1..=5);
    let class = random_class(rng, m, 8)?;
    let tree = random_point_tree(rng, 3, m)?;
    Ok((class, tree))
}

/// Runs `count` seeded instances through `check`, reporting the first failure.
fn random_suite<I, R: Serialize>(
    ctx: &Context,
    count: usize,
    mut make: impl FnMut(&mut ChaCha8Rng) -> Result<I>,
    mut check: impl FnMut(&I) -> Result<(R, bool)>,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut failures = 0;
    let mut first_failure = Value::Null;
    for i in 0..count {
        let inst = make(&mut rng)?;
        let (report, pass) = check(&inst)?;
        if !pass {
            failures += 1;
            if first_failure.is_null() {
                first_failure = json!({"instance": i, "report": to_value(&report)});
            }
        }
    }
    let (result, status) = verdict(failures == 0);
    Ok((
        json!({
            "seed": ctx.seed,
            "instances": count,
            "failures": failures,
            "first_failure": first_failure,
            "result": result,
        }),
        status,
    ))
}

fn single<R: Serialize>(report: R, pass: bool) -> Outcome {
    let mut v = to_value(&report);
    let (result, status) = verdict(pass);
    v["result"] = json!(result);
    Ok((v, status))
}

fn verify(ctx: &Context, kind: &Bound) -> Outcome {
    let limits = &ctx.limits;
    match kind {
        Bound::LdimClosure(inputs) => match inputs.random {
            Some(n) => random_suite(ctx, n, random_closure_instance, |(g, cs)| {
                check_ldim_closure(g, cs, limits).map(|r| {
                    let pass = r.pass;
                    (r, pass)
                })
            }),
            None => {
                let (g, cs) = read_closure_inputs(inputs)?;
                let r = check_ldim_closure(&g, &cs, limits)?;
                let pass = r.pass;
                single(r, pass)
            }
        },
        Bound::TdimClosure(inputs) => match inputs.random {
            Some(n) => random_suite(ctx, n, random_closure_instance, |(g, cs)| {
                check_tdim_closure(g, cs, limits).map(|r| {
                    let pass = r.pass;
                    (r, pass)
                })
            }),
            None => {
                let (g, cs) = read_closure_inputs(inputs)?;
                let r = check_tdim_closure(&g, &cs, limits)?;
                let pass = r.pass;
                single(r, pass)
            }
        },
        Bound::Sauer(inputs) => tree_bound(ctx, inputs, |c, t| {
            check_sauer(c, t, limits).map(|r| {
                let pass = r.pass;
                (to_value(&r), pass)
            })
        }),
        Bound::Thicket(inputs) => tree_bound(ctx, inputs, |c, t| {
            check_thicket(c, t, limits).map(|r| {
                let pass = r.pass;
                (to_value(&r), pass)
            })
        }),
    }
}

fn tree_bound(
    ctx: &Context,
    inputs: &TreeInputs,
    mut check: impl FnMut(&HypothesisClass, &LabeledTree) -> Result<(Value, bool)>,
) -> Outcome {
    match inputs.random {
        Some(n) => random_suite(ctx, n, random_tree_instance, |(c, t)| check(c, t)),
        None => {
            let class = read_class(inputs.class.as_ref().expect("clap enforces presence"))?;
            let tree = read_tree(inputs.tree.as_ref().expect("clap enforces presence"))?;
            let (r, pass) = check(&class, &tree)?;
            single(r, pass)
        }
    }
}

fn color_histogram(coloring: &dimlab::EdgeColoring) -> Value {
    coloring
        .histogram()
        .iter()
        .enumerate()
        .map(|(i, &n)| json!({"color": EdgeColor::from_index(i).to_string(), "edges": n}))
        .collect()
}

fn extract(path: &Path, d: usize) -> Outcome {
    let inst = read_instance(path)?;
    match extract_threshold(&inst, d) {
        Ok(ex) => {
            let valid = dimlab::check_threshold_witness(&inst.classes[ex.coordinate], &ex.witness)?
                .is_valid();
            let (result, status) = verdict(valid && ex.witness.len() == d);
            Ok((
                json!({
                    "points": inst.len(),
                    "coloring": color_histogram(&ex.coloring),
                    "clique": {
                        "color": ex.clique.color.to_string(),
                        "vertices": ex.clique.vertices.iter().map(|v| v + 1).collect::<Vec<_>>(),
                    },
                    "coordinate": ex.coordinate + 1,
                    "witness": {"points": ex.witness.points, "hypotheses": ex.witness.hyps},
                    "valid": valid,
                    "result": result,
                }),
                status,
            ))
        }
        Err(Error::NoClique { required, largest }) => {
            let coloring = color_edges(&inst)?;
            Ok((
                json!({
                    "points": inst.len(),
                    "coloring": color_histogram(&coloring),
                    "required_clique": required,
                    "largest_clique": largest.max(largest_mono_clique(&coloring)),
                    "result": "NOT FOUND",
                }),
                Status::NotFound,
            ))
        }
        Err(e) => Err(e),
    }
}

fn read_script(path: &Path) -> Result<Vec<(usize, bool)>> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    let pairs: Vec<(usize, u8)> = parse_json(&text)?;
    pairs
        .into_iter()
        .map(|(x, b)| match b {
            0 | 1 => Ok((x, b == 1)),
            _ => Err(Error::input(format!("label {b} is not 0 or 1"))),
        })
        .collect()
}

fn soa(ctx: &Context, class: &Path, script: Option<&Path>) -> Outcome {
    let class = read_class(class)?;
    let adversary = match script {
        Some(p) => Adversary::Scripted(read_script(p)?),
        None => Adversary::Optimal,
    };
    let (l, _) = ldim(&class, &ctx.limits)?;
    let record = run_game(&class, &adversary, &ctx.limits)?;
    let (result, status) = verdict(record.mistakes <= l);
    Ok((
        json!({
            "adversary": if script.is_some() { "scripted" } else { "optimal" },
            "ldim": l,
            "mistakes": record.mistakes,
            "rounds": to_value(&record.rounds),
            "result": result,
        }),
        status,
    ))
}

fn report(ctx: &Context, path: &Path) -> Outcome {
    let limits = &ctx.limits;
    let class = read_class(path)?;
    let mut out = json!({
        "domain_size": class.domain_size(),
        "size": class.len(),
    });
    dimension_fields(ctx, &class, Which::All, &mut out)?;
    let (l, cert) = ldim(&class, limits)?;
    let value = game_value(&class, limits)?;
    let game = run_game(&class, &Adversary::Optimal, limits)?;
    out["game_value"] = json!(value);
    out["soa_mistakes_vs_optimal"] = json!(game.mistakes);
    let mut pass = value == l && game.mistakes == l;
    if l > 0 {
        let tree = &cert.tree;
        let (cover, minimal): (CoverSet, bool) =
            match min_zero_cover(&class, tree, CoverMode::Exact, limits) {
                Ok(c) => (c.cover, true),
                Err(Error::BudgetExceeded { .. }) => (
                    min_zero_cover(&class, tree, CoverMode::Greedy, limits)?.cover,
                    false,
                ),
                Err(e) => return Err(e),
            };
        let valid = is_zero_cover(&cover, &class, tree)?.is_valid();
        pass &= valid && cover.len() >= 1 << l;
        out["cover_on_ldim_tree"] = json!({
            "rho": thicket_count(&class, tree)?,
            "size": cover.len(),
            "minimal": minimal,
            "valid": valid,
        });
    }
    let (result, status) = verdict(pass);
    out["result"] = json!(result);
    Ok((out, status))
}
