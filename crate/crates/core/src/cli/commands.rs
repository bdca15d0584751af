use itertools::Itertools;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{config_err, forbidden, join, read_input, Cli, CliError, Command, DensityArgs, GenKind, Produced, Table};
use crate::density::digraph::build_dense_digraph;
use crate::density::DensityParams;
use crate::extremal::{self, is_free, Forbidden, SearchOptions, SearchResult};
use crate::patterns::{contains_kst_by_codegree, find_erdos_quadruple, find_kst};
use crate::regularity::{default_divisor, find_regular_subgraph, RegularizeOptions};
use crate::roots::root_set;
use crate::{Hypergraph, PatternParams};

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(config_err)
}

fn plain(result: Value, table: Table) -> Produced {
    Produced {
        result,
        inputs: Vec::new(),
        table,
        raw: None,
        violation: None,
    }
}

pub(crate) fn dispatch(cli: &Cli) -> Result<Produced, CliError> {
    let seed = cli.global.seed;
    match &cli.command {
        Command::Gen(a) => gen(a, seed),
        Command::Check(a) => check(a),
        Command::Roots(a) => roots(a),
        Command::Regularize(a) => regularize(a, seed),
        Command::Digraph(a) => digraph(a),
        Command::Turan(a) => {
            let params = PatternParams::new(a.r, a.s, a.t).map_err(config_err)?;
            let res = extremal::turan_exact(a.n, params, a.mode.into(), options(&a.search)).map_err(config_err)?;
            search_result(res)
        }
        Command::Fr(a) => {
            let res = extremal::erdos_fr_exact(a.n, a.r, options(&a.search)).map_err(config_err)?;
            search_result(res)
        }
        Command::Verify(a) => super::verify::run(a, seed),
    }
}

fn gen(a: &super::GenArgs, seed: u64) -> Result<Produced, CliError> {
    let need_n = || a.n.ok_or_else(|| CliError::Config("--n is required for a general host".into()));
    let g = match (a.kind, &a.parts) {
        (GenKind::Star, _) => extremal::construct_star(need_n()?, a.r).map_err(config_err)?,
        (GenKind::CompletePartite, Some(parts)) => Hypergraph::complete_partite(parts.clone()).map_err(config_err)?,
        (GenKind::CompletePartite, None) => return Err(CliError::Config("complete-partite needs --parts".into())),
        (GenKind::RandomMaximal, Some(parts)) => {
            let f = forbidden(a.forbid, parts.len(), a.s, a.t)?;
            extremal::construct_random_maximal_partite(parts.clone(), f, seed).map_err(config_err)?
        }
        (GenKind::RandomMaximal, None) => {
            let f = forbidden(a.forbid, a.r, a.s, a.t)?;
            extremal::construct_random_maximal(need_n()?, a.r, f, seed).map_err(config_err)?
        }
        (GenKind::Random, Some(parts)) => extremal::random_partite(parts.clone(), a.p, seed).map_err(config_err)?,
        (GenKind::Random, None) => extremal::random_hypergraph(need_n()?, a.r, a.p, seed).map_err(config_err)?,
    };
    let table = Table {
        header: vec!["edge"],
        rows: g.edges().iter().map(|e| vec![join(e)]).collect(),
    };
    let mut out = plain(json!({ "hypergraph": to_value(&g)?, "text": g.to_text() }), table);
    if a.text {
        out.raw = Some(g.to_text());
    }
    Ok(out)
}

fn check(a: &super::CheckArgs) -> Result<Produced, CliError> {
    let (g, input) = read_input(&a.input)?;
    let params = PatternParams::new(g.r(), a.s, a.t).map_err(config_err)?;
    let embedding = find_kst(&g, params).map_err(config_err)?;
    let by_codegree = contains_kst_by_codegree(&g, params).map_err(config_err)?;
    let quadruple = find_erdos_quadruple(&g);
    let kst_verdict = if embedding.is_some() { "contains" } else { "free" };
    let quad_verdict = if quadruple.is_some() { "contains" } else { "free" };
    let mut violation = None;
    if by_codegree != embedding.is_some() {
        violation = Some("backtracking search and codegree characterization disagree".to_string());
    } else if embedding.as_ref().is_some_and(|e| !e.is_valid_in(&g, params)) {
        violation = Some("embedding does not verify".to_string());
    } else if quadruple.as_ref().is_some_and(|q| !q.is_valid_in(&g)) {
        violation = Some("quadruple does not verify".to_string());
    }
    let table = Table {
        header: vec!["pattern", "verdict", "witness"],
        rows: vec![
            vec![
                format!("K_{{{},{}}}^({})", a.s, a.t, g.r()),
                kst_verdict.into(),
                embedding.as_ref().map(|e| e.edges().iter().map(|x| join(x)).join("; ")).unwrap_or_default(),
            ],
            vec![
                "quadruple".into(),
                quad_verdict.into(),
                quadruple
                    .as_ref()
                    .map(|q| [&q.a, &q.b, &q.c, &q.d].iter().map(|x| join(x)).join("; "))
                    .unwrap_or_default(),
            ],
        ],
    };
    let result = json!({
        "kst": {
            "params": params,
            "verdict": kst_verdict,
            "embedding": embedding,
            "characterization_agrees": by_codegree == embedding.is_some(),
        },
        "quadruple": { "verdict": quad_verdict, "witness": quadruple },
    });
    Ok(Produced {
        result,
        inputs: vec![input],
        table,
        raw: None,
        violation,
    })
}

fn roots(a: &super::RootsArgs) -> Result<Produced, CliError> {
    let (g, input) = read_input(&a.input)?;
    if a.s == 0 || a.s > g.order() {
        return Err(CliError::Config(format!("s = {} does not fit {} vertices", a.s, g.order())));
    }
    let sets: Vec<Vec<crate::Vertex>> = g.vertices().combinations(a.s).collect();
    let reports = sets
        .par_iter()
        .map(|set| root_set(&g, set, a.method.into(), a.exact_budget))
        .collect::<Result<Vec<_>, _>>()
        .map_err(config_err)?;
    let reports: Vec<_> = reports.into_iter().filter(|rep| a.all || rep.cn_size > 0).collect();
    let bound = a.t.map(|t| (t.saturating_sub(1)) * (g.r() - 1));
    let host_free = match a.t {
        Some(t) => Some(
            find_kst(&g, PatternParams::new(g.r(), a.s, t).map_err(config_err)?)
                .map_err(config_err)?
                .is_none(),
        ),
        None => None,
    };
    let violations: Vec<&Vec<crate::Vertex>> = match bound {
        Some(b) => reports.iter().filter(|rep| rep.roots.len() > b).map(|rep| &rep.subject).collect(),
        None => Vec::new(),
    };
    let violation = (host_free == Some(true) && !violations.is_empty())
        .then(|| format!("{} s-sets exceed the root bound in a free host", violations.len()));
    let table = Table {
        header: vec!["subject", "cn_size", "roots"],
        rows: reports
            .iter()
            .map(|rep| vec![join(&rep.subject), rep.cn_size.to_string(), join(&rep.roots)])
            .collect(),
    };
    let result = json!({
        "s": a.s,
        "ssets_checked": sets.len(),
        "reported": reports.len(),
        "root_bound": bound,
        "host_free": host_free,
        "bound_violations": violations,
        "max_roots": reports.iter().map(|rep| rep.roots.len()).max().unwrap_or(0),
        "reports": reports,
    });
    Ok(Produced {
        result,
        inputs: vec![input],
        table,
        raw: None,
        violation,
    })
}

fn regularize(a: &super::RegularizeArgs, seed: u64) -> Result<Produced, CliError> {
    let (g, input) = read_input(&a.input)?;
    let options = RegularizeOptions {
        seed,
        retries: a.retries,
        threshold_divisor: a.deletion_divisor,
        ..RegularizeOptions::new(a.s, a.epsilon)
    };
    let reg = find_regular_subgraph(&g, &options).map_err(config_err)?;
    if let Some(path) = &a.subgraph_output {
        reg.subgraph
            .write_file(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let retention_ok = 2 * reg.subgraph.edge_count() >= reg.bucketed.edge_count();
    let violation = (a.deletion_divisor.is_none() && !retention_ok)
        .then(|| "regular subgraph kept fewer than half of the bucketed edges".to_string());
    let table = Table {
        header: vec!["part", "delta_cap", "threshold", "min_degree", "max_degree"],
        rows: (0..g.r())
            .map(|i| {
                let show = |d: Option<usize>| d.map(|d| d.to_string()).unwrap_or_default();
                vec![
                    i.to_string(),
                    reg.delta_caps[i].to_string(),
                    reg.thresholds[i].to_string(),
                    show(reg.certificate.achieved_min_degree[i]),
                    show(reg.certificate.achieved_max_degree[i]),
                ]
            })
            .collect(),
    };
    let result = json!({
        "original_edges": g.edge_count(),
        "bucketed_edges": reg.bucketed.edge_count(),
        "retained_edges": reg.subgraph.edge_count(),
        "retention_ok": retention_ok,
        "regularization": reg,
    });
    Ok(Produced {
        result,
        inputs: vec![input],
        table,
        raw: None,
        violation,
    })
}

pub(crate) fn density_params(a: &DensityArgs, g: &Hypergraph) -> DensityParams {
    let n = g.balanced_part_size().unwrap_or(2).max(2);
    let base = DensityParams::new(a.s, a.epsilon, a.alpha.unwrap_or_else(|| default_divisor(g.r(), n)));
    DensityParams {
        delta: a.delta.unwrap_or(base.delta),
        codegree_threshold: a.codegree_threshold,
        sset_fraction_threshold: a.sset_threshold,
        zero_class_threshold: a.zero_threshold,
        margin: a.margin,
        root_method: a.root_method.into(),
        exact_budget: a.exact_budget,
        ..base
    }
}

fn digraph(a: &super::DigraphArgs) -> Result<Produced, CliError> {
    let (g, input) = read_input(&a.input)?;
    let params = density_params(&a.density, &g);
    let d = build_dense_digraph(&g, &params, a.require_regular).map_err(config_err)?;
    let verdicts = d.verdicts();
    let table = Table {
        header: vec!["source", "target"],
        rows: d.arcs.iter().map(|&(i, j)| vec![i.to_string(), j.to_string()]).collect(),
    };
    let result = json!({
        "params": params,
        "nodes": d.nodes,
        "arcs": d.arcs,
        "verdicts": verdicts,
        "failures": d.failures,
        "witnesses": d.witnesses,
    });
    Ok(Produced {
        result,
        inputs: vec![input],
        table,
        raw: None,
        violation: None,
    })
}

fn options(a: &super::SearchArgs) -> SearchOptions {
    SearchOptions {
        budget: a.budget,
        witness_limit: a.witnesses,
        ceiling: a.ceiling,
    }
}

/// Whether every witness is free with exactly `value` edges.
pub(crate) fn witnesses_valid(res: &SearchResult) -> bool {
    res.witnesses
        .iter()
        .all(|w| w.edge_count() == res.value && is_free(w, res.forbidden))
}

fn search_result(res: SearchResult) -> Result<Produced, CliError> {
    let violation = (!witnesses_valid(&res)).then(|| "a witness fails re-verification".to_string());
    let forbidden = match res.forbidden {
        Forbidden::Kst(p) => format!("K_{{{},{}}}^({})", p.s, p.t, p.r),
        Forbidden::Quadruple => "quadruple".into(),
    };
    let table = Table {
        header: vec!["n", "r", "forbidden", "mode", "value", "nodes_explored", "exhaustive"],
        rows: vec![vec![
            res.n.to_string(),
            res.r.to_string(),
            forbidden,
            format!("{:?}", res.mode).to_lowercase(),
            res.value.to_string(),
            res.nodes_explored.to_string(),
            res.exhaustive.to_string(),
        ]],
    };
    let mut out = plain(to_value(&res)?, table);
    out.violation = violation;
    Ok(out)
}
