//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turanlab::density::reduce::{bipartite_reduction_witness, count_rooted_pairs, rooted_sset_search};
use turanlab::density::{heavy_vertices, is_delta_dense, BipartiteGraph, DensityParams};
use turanlab::extremal::{self, erdos_fr_exact, turan_exact, Forbidden, SearchMode, SearchOptions};
use turanlab::patterns::find_kst;
use turanlab::regularity::{
    default_divisor, find_regular_subgraph, relative_regular_subgraph, RegularityParams, RegularizeOptions,
};
use turanlab::roots::{root_set, RootMethod};
use turanlab::{Hypergraph, PatternParams, Vertex};

struct Verdict {
    pass: bool,
    summary: String,
}

fn verdict(pass: bool, summary: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        summary: summary.into(),
    }
}

fn fixtures() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))
}

fn sorted(mut e: Vec<Vertex>) -> Vec<Vertex> {
    e.sort_unstable();
    e
}

/// `CN(S)` straight from the definition.
fn cn(g: &Hypergraph, set: &[Vertex]) -> Vec<Vec<Vertex>> {
    g.vertices()
        .filter(|v| !set.contains(v))
        .combinations(g.r() - 1)
        .filter(|b| set.iter().all(|&y| g.contains_edge(&sorted(b.iter().copied().chain([y]).collect()))))
        .collect()
}

fn has_disjoint(sets: &[Vec<Vertex>], t: usize, used: &mut Vec<Vertex>) -> bool {
    if t == 0 {
        return true;
    }
    for (i, b) in sets.iter().enumerate() {
        if b.iter().all(|v| !used.contains(v)) {
            used.extend(b);
            let ok = has_disjoint(&sets[i + 1..], t - 1, used);
            used.truncate(used.len() - b.len());
            if ok {
                return true;
            }
        }
    }
    false
}

fn kst_free(g: &Hypergraph, p: PatternParams) -> bool {
    find_kst(g, p).unwrap().is_none()
}

fn c1_root_bound() -> Verdict {
    let start = Instant::now();
    let params = PatternParams::new(3, 2, 2).unwrap();
    let mut violations = 0;
    let mut worst = 0;
    for seed in 0..200 {
        let g = extremal::construct_random_maximal(12, 3, Forbidden::Kst(params), seed).unwrap();
        for set in g.vertices().combinations(2) {
            let k = root_set(&g, &set, RootMethod::Matching, 0).unwrap().roots.len();
            worst = worst.max(k);
            if k > 2 {
                violations += 1;
            }
        }
    }
    let took = start.elapsed();
    verdict(
        violations == 0 && took < Duration::from_secs(120),
        format!("200 hosts, max roots {worst} (bound 2), {violations} violations, {took:.2?}"),
    )
}

fn c2_set_degree() -> Verdict {
    let params = PatternParams::new(3, 2, 2).unwrap();
    let mut violations = 0;
    let mut free = 0;
    let n = 6usize;
    for seed in 0..100u64 {
        let g = if seed % 2 == 0 {
            extremal::construct_random_maximal_partite(vec![n; 3], Forbidden::Kst(params), seed).unwrap()
        } else {
            extremal::random_partite(vec![n; 3], 0.1 + 0.8 * (seed as f64 / 100.0), seed).unwrap()
        };
        let delta = g.max_tuple_degree();
        for k in 1..3usize {
            for a in g.vertices().combinations(k) {
                if a.iter().map(|&v| g.part_of(v)).unique().count() != k {
                    continue;
                }
                let d = g.edges().iter().filter(|e| a.iter().all(|v| e.contains(v))).count();
                if d > delta * n.pow((3 - k - 1) as u32) {
                    violations += 1;
                }
            }
        }
        if kst_free(&g, params) {
            free += 1;
            for s in g.vertices().combinations(2) {
                if cn(&g, &s).len() > 3 * 2 * delta {
                    violations += 1;
                }
            }
        }
        if turanlab::roots::check_set_degree_bounds(&g, kst_free(&g, params).then_some((2, 2))).is_none_or(|r| !r.ok()) {
            violations += 1;
        }
    }
    verdict(violations == 0, format!("100 hosts ({free} free), {violations} violations"))
}

fn c3_averaging() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut violations = 0;
    for _ in 0..1000 {
        let (a, b) = (rng.random_range(1..=30usize), rng.random_range(1..=30usize));
        let p = rng.random_range(0.02..1.0);
        let mut edges: Vec<(usize, usize)> = (0..a).cartesian_product(0..b).filter(|_| rng.random_bool(p)).collect();
        if edges.is_empty() {
            edges.push((rng.random_range(0..a), rng.random_range(0..b)));
        }
        let e = edges.len();
        let g = BipartiteGraph::new(a, b, edges).unwrap();
        let rho = Ratio::new(e as u64, (a * b) as u64);
        let h = heavy_vertices(&g, rho).unwrap();
        let big = |x: usize| BigRational::from_integer(BigInt::from(x));
        let rho_big = BigRational::new(BigInt::from(e), BigInt::from(a * b));
        let need = rho_big.clone() * big(a) / big(2);
        let cutoff = rho_big * big(b) / big(2);
        let heavy_ok = h.vertices.iter().all(|&v| big(g.degree(v)) >= cutoff);
        let all_heavy = (0..a).filter(|&v| big(g.degree(v)) >= cutoff).count() == h.vertices.len();
        if big(h.vertices.len()) < need || !heavy_ok || !all_heavy {
            violations += 1;
        }
    }
    let took = start.elapsed();
    verdict(
        violations == 0 && took < Duration::from_secs(10),
        format!("1000 graphs, {violations} violations, {took:.2?}"),
    )
}

fn c4_regularization() -> Verdict {
    let n = 8usize;
    let r = 3usize;
    let mut violations = Vec::new();
    let mut deleted = 0;
    for seed in 0..100u64 {
        let p = 0.2 + 0.7 * (seed as f64 / 99.0);
        let g = extremal::random_partite(vec![n; r], p, seed).unwrap();
        let reg = find_regular_subgraph(&g, &RegularizeOptions { seed, ..RegularizeOptions::new(2, 0.1) }).unwrap();
        let h = &reg.subgraph;
        let divisor = 4.0 * r as f64 * (n as f64).log2().powi(r as i32);
        deleted += reg.bucketed.edge_count() - h.edge_count();
        if 2 * h.edge_count() < reg.bucketed.edge_count() {
            violations.push(format!("seed {seed}: retention"));
        }
        for part in 0..r {
            let cap = reg.delta_caps[part] as f64;
            for (_, d) in h.tuple_degrees(part).unwrap() {
                if d as f64 > cap || (d as f64) < cap / divisor {
                    violations.push(format!("seed {seed}: tuple degree {d} outside window"));
                }
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sub = g.retain(|_| rng.random_bool(0.5));
        if sub.edge_count() == 0 {
            continue;
        }
        let c = (g.edge_count() as f64 / sub.edge_count() as f64).max(2.0);
        let params = RegularityParams {
            s: 2,
            epsilon: 0.1,
            alpha: default_divisor(r, n),
        };
        let rel = relative_regular_subgraph(&g, &sub, c, params).unwrap();
        if 2 * rel.subgraph.edge_count() < sub.edge_count() {
            violations.push(format!("seed {seed}: relative retention"));
        }
        for part in 0..r {
            for (t, d) in rel.subgraph.tuple_degrees(part).unwrap() {
                if (d as f64) < g.degree(&t).unwrap() as f64 / (2.0 * c * r as f64) {
                    violations.push(format!("seed {seed}: relative tuple degree"));
                }
            }
        }
    }
    verdict(
        violations.is_empty(),
        format!("100 hosts, {deleted} edges deleted by the default loop, violations {violations:?}"),
    )
}

fn fixture_values() -> Vec<(usize, usize, usize)> {
    let text = std::fs::read_to_string(fixtures().join("turan.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let get = |k: &str| e[k].as_u64().unwrap() as usize;
            (get("n"), get("ex"), get("f"))
        })
        .collect()
}

fn c5_turan_values() -> Verdict {
    let params = PatternParams::new(3, 2, 2).unwrap();
    let fixture6 = fixture_values().into_iter().find(|e| e.0 == 6).map(|e| e.1);
    let mut notes = Vec::new();
    let mut pass = fixture6.is_some();
    for n in 4..=6 {
        let start = Instant::now();
        let res = turan_exact(n, params, SearchMode::All, SearchOptions::default()).unwrap();
        let took = start.elapsed();
        let expected = if n < 6 { n * (n - 1) * (n - 2) / 6 } else { fixture6.unwrap_or(usize::MAX) };
        let ok = res.exhaustive && res.value == expected && took < Duration::from_secs(600);
        pass &= ok;
        notes.push(format!("n={n}: {} (expected {expected}, {took:.2?})", res.value));
    }
    verdict(pass, notes.join(", "))
}

fn c6_cross_oracle() -> Verdict {
    let params = PatternParams::new(3, 2, 2).unwrap();
    let mut pass = true;
    let mut values = Vec::new();
    for n in 0..=6 {
        let a = turan_exact(n, params, SearchMode::All, SearchOptions::default()).unwrap();
        let b = erdos_fr_exact(n, 3, SearchOptions::default()).unwrap();
        pass &= a.exhaustive && b.exhaustive && a.value == b.value;
        values.push(format!("{}/{}", a.value, b.value));
    }
    verdict(pass, format!("ex/f for n = 0..6: {}", values.join(" ")))
}

fn c7_detection() -> Verdict {
    let shapes = [(3, 2, 2), (3, 2, 3), (3, 3, 2), (4, 2, 2)];
    let mut disagreements = Vec::new();
    let mut counts = [0usize; 2];
    for seed in 0..500u64 {
        let (r, s, t) = shapes[(seed % 4) as usize];
        let n = 6 + (seed as usize / 4) % 7;
        let params = PatternParams::new(r, s, t).unwrap();
        let g = if seed % 5 == 0 {
            extremal::construct_random_maximal(n, r, Forbidden::Kst(params), seed).unwrap()
        } else {
            let p = [0.08, 0.15, 0.3, 0.5][(seed as usize / 5) % 4];
            extremal::random_hypergraph(n, r, p, seed).unwrap()
        };
        let backtracking = !kst_free(&g, params);
        let characterization = g.vertices().combinations(s).any(|y| has_disjoint(&cn(&g, &y), t, &mut Vec::new()));
        counts[characterization as usize] += 1;
        if backtracking != characterization {
            disagreements.push(seed);
        }
    }
    verdict(
        disagreements.is_empty() && counts[0] > 0 && counts[1] > 0,
        format!("500 hosts ({} free, {} containing), disagreements {disagreements:?}", counts[0], counts[1]),
    )
}

fn c8_counting() -> Verdict {
    let (s, t, r) = (2usize, 2usize, 3usize);
    let params = PatternParams::new(r, s, t).unwrap();
    let mut violations = 0;
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let n = 4 + (seed as usize % 4);
        let g = extremal::construct_random_maximal_partite(vec![n; r], Forbidden::Kst(params), seed).unwrap();
        let ys: Vec<Vertex> = g.part_range(0).collect();
        let zs: Vec<Vertex> = g.part_range(1).collect();
        let c = count_rooted_pairs(&g, &ys, &zs, s, t).unwrap();
        let mut m = 0;
        for set in zs.iter().copied().combinations(s) {
            let roots = root_set(&g, &set, RootMethod::Matching, 0).unwrap().roots;
            m += ys.iter().filter(|y| roots.contains(y)).count();
        }
        let bound = r * t * zs.len().pow(s as u32);
        worst = worst.max(m as f64 / bound as f64);
        if m != c.m || m > bound || !c.within || c.bound != bound as u128 {
            violations += 1;
        }
    }
    verdict(
        violations == 0,
        format!("100 free hosts, max m/(rt|Z|^s) = {worst:.3}, {violations} violations"),
    )
}

fn c9_soundness() -> Verdict {
    let mut hosts = vec![
        Hypergraph::complete_partite(vec![3, 3, 3]).unwrap(),
        Hypergraph::complete_partite(vec![4, 4, 4]).unwrap(),
        Hypergraph::complete_partite(vec![3, 3, 3, 3]).unwrap(),
    ];
    for seed in 0..12u64 {
        hosts.push(extremal::random_partite(vec![4; 3], 0.4 + 0.05 * seed as f64, seed).unwrap());
        hosts.push(extremal::random_partite(vec![3; 4], 0.5 + 0.04 * seed as f64, seed).unwrap());
    }
    let mut ssets = 0;
    let mut witnesses = 0;
    let mut discrepancies = 0;
    for g in &hosts {
        let r = g.r();
        for s in 2..=3 {
            let params = DensityParams::permissive(s);
            for tuple in g.tuples(r - 1).unwrap() {
                let v1 = tuple[0];
                let link: Vec<Vertex> = g.link(&tuple).unwrap().into_iter().flatten().collect();
                let xs: Vec<Vertex> = link
                    .into_iter()
                    .filter(|&v| is_delta_dense(g, &tuple, v, v1, &params).unwrap().dense)
                    .collect();
                if let Ok(found) = rooted_sset_search(g, &tuple, &xs, 0, &params) {
                    for set in &found.ssets {
                        ssets += 1;
                        let covers = root_set(g, set, RootMethod::Matching, 0).unwrap().is_rooted_on(v1);
                        if !covers {
                            discrepancies += 1;
                        }
                    }
                }
                if xs.is_empty() {
                    continue;
                }
                for target in 1..r - 1 {
                    let w = bipartite_reduction_witness(g, &tuple, &xs, 0, target, &params).unwrap();
                    witnesses += 1;
                    for (&y, &hits) in &w.per_y_hits {
                        let recount = w
                            .z
                            .iter()
                            .filter(|&&z| g.contains_edge(&sorted([v1, y, z].into_iter().chain(w.r_tuple.iter().copied()).collect())))
                            .count();
                        if recount != hits {
                            discrepancies += 1;
                        }
                    }
                    if w.per_y_hits.keys().copied().collect::<Vec<_>>() != w.y || !w.replays(g) {
                        discrepancies += 1;
                    }
                }
            }
        }
    }
    verdict(
        discrepancies == 0 && ssets > 0 && witnesses > 0,
        format!("{} hosts, {ssets} rooted s-sets, {witnesses} witnesses, {discrepancies} discrepancies", hosts.len()),
    )
}

fn c10_determinism() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_turanlab");
    let input = fixtures().join("random_partite_444.hgr");
    let input = input.to_str().unwrap();
    let runs: [&[&str]; 2] = [&["verify"], &["digraph", "--input", input, "--codegree-threshold", "1"]];
    let mut notes = Vec::new();
    let mut pass = true;
    for args in runs {
        let outputs: Vec<Vec<u8>> = ["1", "2", "8"]
            .iter()
            .map(|k| {
                let out = Command::new(bin)
                    .args(args)
                    .args(["--seed", "0", "--threads", k])
                    .env("TURANLAB_FIXTURES", fixtures())
                    .output()
                    .unwrap();
                if !out.status.success() {
                    pass = false;
                }
                out.stdout
            })
            .collect();
        let same = outputs.iter().all_equal() && !outputs[0].is_empty();
        pass &= same;
        notes.push(format!("{}: {} bytes, identical {same}", args[0], outputs[0].len()));
    }
    verdict(pass, notes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("1 root bound", c1_root_bound),
        ("2 set-degree bounds", c2_set_degree),
        ("3 bipartite averaging", c3_averaging),
        ("4 regularization guarantees", c4_regularization),
        ("5 exact Turán values", c5_turan_values),
        ("6 cross-oracle identity", c6_cross_oracle),
        ("7 detection equivalence", c7_detection),
        ("8 counting bound", c8_counting),
        ("9 witness soundness", c9_soundness),
        ("10 determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!("{} criterion {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.summary);
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
}
