//! The invariant suite behind `verify`.

use std::fs;
use std::path::Path;

use itertools::Itertools;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::commands::witnesses_valid;
use super::{config_err, default_fixtures_dir, digest, CliError, InputDigest, Produced, Table, VerifyArgs};
use crate::density::digraph::build_dense_digraph;
use crate::density::reduce::{bipartite_reduction_witness, count_rooted_pairs, rooted_sset_search};
use crate::density::{heavy_vertices, is_delta_dense, BipartiteGraph, DensityError, DensityParams};
use crate::extremal::{self, Forbidden, SearchMode, SearchOptions};
use crate::patterns::{contains_kst_by_codegree, find_erdos_quadruple, find_kst};
use crate::regularity::{
    default_divisor, find_regular_subgraph, relative_regular_subgraph, RegularityParams, RegularizeOptions,
};
use crate::roots::{check_set_degree_bounds, compare_root_methods, is_vertex_cover, root_set, RootMethod};
use crate::{Hypergraph, PatternParams, Vertex};

#[derive(Debug, Clone, Deserialize)]
struct InstanceSpec {
    file: String,
    s: usize,
    t: usize,
    kst_free: bool,
    quadruple_free: bool,
}

#[derive(Debug, Clone, Deserialize)]
struct InstanceManifest {
    instances: Vec<InstanceSpec>,
}

#[derive(Debug, Clone, Deserialize)]
struct TuranEntry {
    n: usize,
    r: usize,
    s: usize,
    t: usize,
    ex: usize,
    f: usize,
}

#[derive(Debug, Clone, Deserialize)]
struct TuranFixture {
    entries: Vec<TuranEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub subject: String,
    pub pass: bool,
    pub detail: String,
}

fn outcome(name: &'static str, subject: &str, pass: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        subject: subject.to_string(),
        pass,
        detail,
    }
}

fn read_fixture(dir: &Path, name: &str) -> Result<(String, InputDigest), CliError> {
    let path = dir.join(name);
    let bytes = fs::read(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let d = digest(name, &bytes);
    let text = String::from_utf8(bytes).map_err(|e| CliError::Config(format!("{name}: {e}")))?;
    Ok((text, d))
}

fn parse_json<T: for<'de> Deserialize<'de>>(name: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("{name}: {e}")))
}

pub(crate) fn run(a: &VerifyArgs, seed: u64) -> Result<Produced, CliError> {
    let dir = a.fixtures.clone().unwrap_or_else(default_fixtures_dir);
    let mut inputs = Vec::new();
    let (text, d) = read_fixture(&dir, "instances.json")?;
    inputs.push(d);
    let manifest: InstanceManifest = parse_json("instances.json", &text)?;
    let (text, d) = read_fixture(&dir, "turan.json")?;
    inputs.push(d);
    let turan: TuranFixture = parse_json("turan.json", &text)?;

    let mut hosts = Vec::new();
    for spec in &manifest.instances {
        let (text, d) = read_fixture(&dir, &spec.file)?;
        inputs.push(d);
        let g = Hypergraph::from_text(&text).map_err(|e| CliError::Config(format!("{}: {e}", spec.file)))?;
        hosts.push((spec.clone(), text, g));
    }

    let mut checks: Vec<CheckOutcome> = hosts
        .par_iter()
        .map(|(spec, text, g)| instance_checks(spec, text, g, seed))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    for entry in &turan.entries {
        checks.extend(turan_checks(entry, a.budget)?);
    }
    checks.extend(random_battery(seed, a.random_instances));

    let failed: Vec<&CheckOutcome> = checks.iter().filter(|c| !c.pass).collect();
    let violation = (!failed.is_empty()).then(|| {
        format!(
            "{} of {} checks failed: {}",
            failed.len(),
            checks.len(),
            failed.iter().map(|c| format!("{}[{}]", c.name, c.subject)).join(", ")
        )
    });
    let table = Table {
        header: vec!["check", "subject", "pass", "detail"],
        rows: checks
            .iter()
            .map(|c| vec![c.name.to_string(), c.subject.clone(), c.pass.to_string(), c.detail.clone()])
            .collect(),
    };
    let result = json!({
        "checks_run": checks.len(),
        "checks_failed": failed.len(),
        "pass": failed.is_empty(),
        "checks": checks,
    });
    Ok(Produced {
        result,
        inputs,
        table,
        raw: None,
        violation,
    })
}

fn instance_checks(spec: &InstanceSpec, text: &str, g: &Hypergraph, seed: u64) -> Vec<CheckOutcome> {
    let name = spec.file.as_str();
    let mut out = vec![outcome(
        "canonical_text",
        name,
        g.to_text() == text,
        format!("{} edges", g.edge_count()),
    )];
    let params = match PatternParams::new(g.r(), spec.s, spec.t) {
        Ok(p) => p,
        Err(e) => {
            out.push(outcome("pattern_params", name, false, e.to_string()));
            return out;
        }
    };
    out.push(detection(spec, g, params));
    let quad = find_erdos_quadruple(g);
    out.push(outcome(
        "quadruple_verdict",
        name,
        quad.is_none() == spec.quadruple_free && quad.as_ref().is_none_or(|q| q.is_valid_in(g)),
        format!("expected free = {}, found = {}", spec.quadruple_free, quad.is_some()),
    ));
    if spec.kst_free {
        out.push(root_bound(name, g, params));
    }
    let balanced = g.balanced_part_size().is_some_and(|n| n >= 2);
    if balanced && g.r() >= 3 {
        let report = check_set_degree_bounds(g, spec.kst_free.then_some((spec.s, spec.t)));
        out.push(outcome(
            "set_degree_bounds",
            name,
            report.as_ref().is_some_and(|r| r.ok()),
            report
                .map(|r| format!("{} tuples, {} s-sets, delta {}", r.tuples_checked, r.ssets_checked, r.delta))
                .unwrap_or_default(),
        ));
    }
    if balanced {
        out.push(regularization(name, g, spec.s, seed));
        out.push(relative_regularization(name, g, spec.s));
        out.push(digraph_soundness(name, g, spec.s));
    }
    if balanced && g.r() >= 3 {
        out.push(constructive_soundness(name, g, spec.s));
    }
    if balanced && spec.kst_free {
        let ys: Vec<Vertex> = g.part_range(0).collect();
        let zs: Vec<Vertex> = g.part_range(1).collect();
        let res = count_rooted_pairs(g, &ys, &zs, spec.s, spec.t);
        out.push(match res {
            Ok(c) => outcome("counting_bound", name, c.within, format!("m = {}, bound = {}", c.m, c.bound)),
            Err(e) => outcome("counting_bound", name, false, e.to_string()),
        });
    }
    out
}

fn detection(spec: &InstanceSpec, g: &Hypergraph, params: PatternParams) -> CheckOutcome {
    let name = spec.file.as_str();
    let (emb, by_codegree) = match (find_kst(g, params), contains_kst_by_codegree(g, params)) {
        (Ok(e), Ok(c)) => (e, c),
        (Err(e), _) | (_, Err(e)) => return outcome("kst_verdict", name, false, e.to_string()),
    };
    let pass = emb.is_none() == spec.kst_free
        && by_codegree == emb.is_some()
        && emb.as_ref().is_none_or(|e| e.is_valid_in(g, params));
    outcome(
        "kst_verdict",
        name,
        pass,
        format!("expected free = {}, search = {}, characterization = {}", spec.kst_free, emb.is_some(), by_codegree),
    )
}

fn root_bound(name: &str, g: &Hypergraph, params: PatternParams) -> CheckOutcome {
    let bound = (params.t - 1) * (g.r() - 1);
    let mut worst = 0;
    let mut bad = Vec::new();
    for set in g.vertices().combinations(params.s) {
        let cmp = match compare_root_methods(g, &set, crate::roots::DEFAULT_EXACT_BUDGET) {
            Ok(c) => c,
            Err(e) => return outcome("root_bound", name, false, e.to_string()),
        };
        let cn = crate::roots::common_neighborhood(g, &set).expect("valid set");
        worst = worst.max(cmp.matching.roots.len());
        let exact_ok = cmp
            .exact
            .as_ref()
            .is_none_or(|e| e.roots.len() <= cmp.matching.roots.len() && is_vertex_cover(&e.roots, &cn));
        if cmp.matching.roots.len() > bound || !exact_ok || !is_vertex_cover(&cmp.matching.roots, &cn) {
            bad.push(set);
        }
    }
    outcome(
        "root_bound",
        name,
        bad.is_empty(),
        format!("max roots {worst}, bound {bound}, violations {bad:?}"),
    )
}

fn regularization(name: &str, g: &Hypergraph, s: usize, seed: u64) -> CheckOutcome {
    let options = RegularizeOptions {
        seed,
        ..RegularizeOptions::new(s, 0.1)
    };
    let reg = match find_regular_subgraph(g, &options) {
        Ok(reg) => reg,
        Err(e) => return outcome("regularization", name, false, e.to_string()),
    };
    let h = &reg.subgraph;
    let retained = 2 * h.edge_count() >= reg.bucketed.edge_count();
    let mut window_ok = true;
    for part in 0..h.r() {
        let cap = reg.delta_caps[part] as f64;
        for (_, d) in h.tuple_degrees(part).expect("partite") {
            let d = d as f64;
            if d > cap || d < cap / reg.divisor * (1.0 - 1e-12) {
                window_ok = false;
            }
        }
    }
    let replay_ok = reg.trace.replay(&reg.bucketed).as_ref() == Some(h) && h.is_subgraph_of(&reg.bucketed);
    outcome(
        "regularization",
        name,
        retained && window_ok && replay_ok,
        format!(
            "kept {} of {} bucketed edges, caps {:?}, divisor {:.3}",
            h.edge_count(),
            reg.bucketed.edge_count(),
            reg.delta_caps,
            reg.divisor
        ),
    )
}

fn relative_regularization(name: &str, g: &Hypergraph, s: usize) -> CheckOutcome {
    let n = g.balanced_part_size().expect("balanced");
    let c = 2.0;
    let mut k = 0usize;
    let sub = g.retain(|_| {
        k += 1;
        k % 2 == 1
    });
    let params = RegularityParams {
        s,
        epsilon: 0.1,
        alpha: default_divisor(g.r(), n),
    };
    let rel = match relative_regular_subgraph(g, &sub, c, params) {
        Ok(rel) => rel,
        Err(e) => return outcome("relative_regularization", name, sub.edge_count() == 0, e.to_string()),
    };
    let h = &rel.subgraph;
    let retained = 2 * h.edge_count() >= sub.edge_count();
    let factor = 2.0 * c * g.r() as f64;
    let lower_ok = (0..h.r()).all(|part| {
        h.tuple_degrees(part)
            .expect("partite")
            .iter()
            .all(|(t, d)| *d as f64 >= g.degree(t).expect("tuple") as f64 / factor * (1.0 - 1e-12))
    });
    let replay_ok = rel.trace.replay(&sub).as_ref() == Some(h);
    outcome(
        "relative_regularization",
        name,
        retained && lower_ok && replay_ok,
        format!("kept {} of {} edges", h.edge_count(), sub.edge_count()),
    )
}

fn digraph_soundness(name: &str, g: &Hypergraph, s: usize) -> CheckOutcome {
    let d = match build_dense_digraph(g, &DensityParams::permissive(s), false) {
        Ok(d) => d,
        Err(e) => return outcome("digraph_soundness", name, false, e.to_string()),
    };
    let witnesses_ok = d.witnesses.iter().all(|w| {
        w.check.holds && w.subgraph.is_subgraph_of(g) && w.subgraph.edge_count() > 0 && d.arcs.contains(&(w.source, w.target))
    });
    let covered = d.arcs.len() == d.witnesses.len() && d.witnesses.len() + d.failures.len() == g.r();
    outcome(
        "digraph_soundness",
        name,
        witnesses_ok && covered,
        format!("arcs {:?}, failures {}", d.arcs, d.failures.len()),
    )
}

/// Tuples avoiding the last part, source part 0, every other part as target.
fn constructive_soundness(name: &str, g: &Hypergraph, s: usize) -> CheckOutcome {
    const TUPLE_LIMIT: usize = 12;
    let params = DensityParams::permissive(s);
    let r = g.r();
    let mut ssets = 0;
    let mut unrooted = Vec::new();
    let mut witnesses = 0;
    let mut unreplayed = 0;
    let mut errors = Vec::new();
    for tuple in g.tuples(r - 1).expect("partite").into_iter().take(TUPLE_LIMIT) {
        let v1 = tuple[0];
        let link: Vec<Vertex> = g.link(&tuple).expect("tuple").into_iter().flatten().collect();
        let xs: Vec<Vertex> = link
            .iter()
            .copied()
            .filter(|&v| is_delta_dense(g, &tuple, v, v1, &params).is_ok_and(|c| c.dense))
            .collect();
        match rooted_sset_search(g, &tuple, &xs, 0, &params) {
            Ok(found) => {
                for set in found.ssets {
                    ssets += 1;
                    let report = root_set(g, &set, RootMethod::Matching, params.exact_budget);
                    if !report.is_ok_and(|rep| rep.is_rooted_on(v1)) {
                        unrooted.push(set);
                    }
                }
            }
            Err(DensityError::MarginTooSmall { .. }) => {}
            Err(e) => errors.push(e.to_string()),
        }
        if xs.is_empty() {
            continue;
        }
        for target in 1..r - 1 {
            match bipartite_reduction_witness(g, &tuple, &xs, 0, target, &params) {
                Ok(w) => {
                    witnesses += 1;
                    if !w.replays(g) {
                        unreplayed += 1;
                    }
                }
                Err(e) => errors.push(e.to_string()),
            }
        }
    }
    outcome(
        "constructive_soundness",
        name,
        unrooted.is_empty() && unreplayed == 0 && errors.is_empty(),
        format!(
            "{ssets} s-sets ({} unrooted), {witnesses} witnesses ({unreplayed} not replayed), errors {errors:?}",
            unrooted.len()
        ),
    )
}

fn turan_checks(e: &TuranEntry, budget: u64) -> Result<Vec<CheckOutcome>, CliError> {
    let subject = format!("n={} r={} s={} t={}", e.n, e.r, e.s, e.t);
    let options = SearchOptions {
        budget,
        ..SearchOptions::default()
    };
    let params = PatternParams::new(e.r, e.s, e.t).map_err(config_err)?;
    let ex = extremal::turan_exact(e.n, params, SearchMode::All, options).map_err(config_err)?;
    let f = extremal::erdos_fr_exact(e.n, e.r, options).map_err(config_err)?;
    Ok(vec![
        outcome(
            "turan_value",
            &subject,
            ex.exhaustive && ex.value == e.ex && witnesses_valid(&ex),
            format!("value {} (fixture {}), {} nodes", ex.value, e.ex, ex.nodes_explored),
        ),
        outcome(
            "fr_value",
            &subject,
            f.exhaustive && f.value == e.f && witnesses_valid(&f),
            format!("value {} (fixture {}), {} nodes", f.value, e.f, f.nodes_explored),
        ),
    ])
}

fn random_battery(seed: u64, count: usize) -> Vec<CheckOutcome> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| random_case(seed.wrapping_mul(1_000_003).wrapping_add(i)))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn random_case(seed: u64) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subject = format!("seed {seed}");
    let mut out = Vec::new();

    let n = rng.random_range(6..=10);
    let p = rng.random_range(0.05..0.5);
    let g = extremal::random_hypergraph(n, 3, p, seed).expect("valid probability");
    let params = PatternParams::new(3, 2, 2).expect("valid");
    let search = find_kst(&g, params).expect("arity").is_some();
    let by_codegree = contains_kst_by_codegree(&g, params).expect("arity");
    out.push(outcome(
        "random_detection",
        &subject,
        search == by_codegree,
        format!("n {n}, {} edges, contains {search}", g.edge_count()),
    ));

    let (a, b) = (rng.random_range(1..=30usize), rng.random_range(1..=30usize));
    let q = rng.random_range(0.05..1.0);
    let edges: Vec<(usize, usize)> = (0..a).cartesian_product(0..b).filter(|_| rng.random_bool(q)).collect();
    let bip = BipartiteGraph::new(a, b, edges).expect("in range");
    let averaging = match bip.density().filter(|d| *d > Ratio::new(0, 1)) {
        Some(rho) => heavy_vertices(&bip, rho).is_ok_and(|h| h.guarantee_met),
        None => true,
    };
    out.push(outcome("random_averaging", &subject, averaging, format!("|A| {a}, |B| {b}")));

    let free = extremal::construct_random_maximal(9, 3, Forbidden::Kst(params), seed).expect("fits");
    let bound = (params.t - 1) * 2;
    let worst = free
        .vertices()
        .combinations(2)
        .map(|set| root_set(&free, &set, RootMethod::Matching, 0).map(|r| r.roots.len()).unwrap_or(usize::MAX))
        .max()
        .unwrap_or(0);
    out.push(outcome(
        "random_root_bound",
        &subject,
        worst <= bound && extremal::is_free(&free, Forbidden::Kst(params)),
        format!("{} edges, max roots {worst}", free.edge_count()),
    ));
    out
}
