use itertools::Itertools;
use num_rational::Ratio;
use proptest::prelude::*;
use turanlab::density::{heavy_ssets, heavy_vertices, BipartiteGraph};
use turanlab::extremal::{self, construct_star, turan_exact, Forbidden, SearchMode, SearchOptions};
use turanlab::patterns::{contains_kst_by_codegree, find_erdos_quadruple, find_kst, is_kst_free};
use turanlab::regularity::{delete_below_caps, delete_below_relative, find_regular_subgraph, RegularizeOptions};
use turanlab::roots::{common_neighborhood, greedy_matching, is_vertex_cover, minimum_vertex_cover, root_set, RootMethod};
use turanlab::{Hypergraph, PatternParams, Vertex};

fn general() -> impl Strategy<Value = Hypergraph> {
    (5usize..=9, 0.05f64..0.6, any::<u64>()).prop_map(|(n, p, seed)| extremal::random_hypergraph(n, 3, p, seed).unwrap())
}

fn partite() -> impl Strategy<Value = Hypergraph> {
    (2usize..=5, 0.1f64..0.9, any::<u64>())
        .prop_map(|(n, p, seed)| extremal::random_partite(vec![n; 3], p, seed).unwrap())
}

fn bipartite() -> impl Strategy<Value = BipartiteGraph> {
    (1usize..=12, 1usize..=12)
        .prop_flat_map(|(a, b)| (Just(a), Just(b), proptest::collection::vec(any::<bool>(), a * b)))
        .prop_map(|(a, b, bits)| {
            let edges = (0..a).cartesian_product(0..b).zip(bits).filter(|(_, keep)| *keep).map(|(e, _)| e);
            BipartiteGraph::new(a, b, edges.collect::<Vec<_>>()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(g in partite()) {
        let back = Hypergraph::from_text(&g.to_text()).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_text(), g.to_text());
    }

    #[test]
    fn search_and_characterization_agree(g in general(), s in 1usize..=3, t in 1usize..=3) {
        let params = PatternParams::new(3, s, t).unwrap();
        let emb = find_kst(&g, params).unwrap();
        prop_assert_eq!(emb.is_some(), contains_kst_by_codegree(&g, params).unwrap());
        if let Some(e) = emb {
            prop_assert!(e.is_valid_in(&g, params));
        }
    }

    #[test]
    fn monotone_in_t(g in general()) {
        let free2 = is_kst_free(&g, PatternParams::new(3, 2, 2).unwrap()).unwrap();
        let free3 = is_kst_free(&g, PatternParams::new(3, 2, 3).unwrap()).unwrap();
        prop_assert!(!free2 || free3);
    }

    #[test]
    fn quadruple_witness_verifies(g in general()) {
        if let Some(q) = find_erdos_quadruple(&g) {
            prop_assert!(q.is_valid_in(&g));
        }
    }

    #[test]
    fn roots_cover_and_exact_is_no_larger(g in general()) {
        for set in g.vertices().combinations(2) {
            let cn = common_neighborhood(&g, &set).unwrap();
            let m = root_set(&g, &set, RootMethod::Matching, 0).unwrap();
            let e = root_set(&g, &set, RootMethod::Exact, 512).unwrap();
            prop_assert!(is_vertex_cover(&m.roots, &cn));
            prop_assert!(is_vertex_cover(&e.roots, &cn));
            prop_assert!(e.roots.len() <= m.roots.len());
            prop_assert_eq!(minimum_vertex_cover(&cn).len(), e.roots.len());
            prop_assert_eq!(m.matching.len(), greedy_matching(&cn).len());
        }
    }

    #[test]
    fn free_hosts_have_few_roots(n in 7usize..=10, seed: u64) {
        let params = PatternParams::new(3, 2, 2).unwrap();
        let g = extremal::construct_random_maximal(n, 3, Forbidden::Kst(params), seed).unwrap();
        for set in g.vertices().combinations(2) {
            prop_assert!(root_set(&g, &set, RootMethod::Matching, 0).unwrap().roots.len() <= 2);
        }
    }

    #[test]
    fn heavy_vertices_guarantee(g in bipartite()) {
        if let Some(rho) = g.density().filter(|d| *d > Ratio::new(0, 1)) {
            let h = heavy_vertices(&g, rho).unwrap();
            prop_assert!(h.guarantee_met);
            // 2|N(a)|·|A| ≥ e(G) for each returned a
            for &a in &h.vertices {
                prop_assert!(2 * g.degree(a) * g.a_size() >= g.edge_count());
            }
            prop_assert!(2 * h.vertices.len() * g.b_size() >= g.edge_count());
        }
    }

    #[test]
    fn heavy_ssets_meet_cutoff(g in bipartite()) {
        if let Some(rho) = g.density().filter(|d| *d > Ratio::new(0, 1)) {
            if let Ok(h) = heavy_ssets(&g, rho, 2, 0.5) {
                // 3·cd·|A|²·|B|² ≥ e²·|B|
                let (a, b, e) = (g.a_size() as u128, g.b_size() as u128, g.edge_count() as u128);
                for set in &h.ssets {
                    prop_assert!(3 * g.common_degree(set) as u128 * a * a * b * b >= e * e * b);
                }
            }
        }
    }

    #[test]
    fn deletion_is_stable_and_replays(g in partite(), divisor in 1.0f64..6.0) {
        let caps: Vec<u64> = (0..3).map(|i| g.tuple_degrees(i).unwrap().iter().map(|x| x.1 as u64).max().unwrap_or(1)).collect();
        let (h, trace) = delete_below_caps(&g, &caps, divisor);
        prop_assert!(h.is_subgraph_of(&g));
        prop_assert_eq!(trace.replay(&g), Some(h.clone()));
        for part in 0..3 {
            for (_, d) in h.tuple_degrees(part).unwrap() {
                prop_assert!(d as f64 >= caps[part] as f64 / divisor * (1.0 - 1e-12));
            }
        }
        let (again, second) = delete_below_caps(&h, &caps, divisor);
        prop_assert_eq!(again, h);
        prop_assert_eq!(second.edges_deleted, 0);
    }

    #[test]
    fn relative_deletion_keeps_half(g in partite(), seed: u64) {
        let mut k = seed;
        let sub = g.retain(|_| { k = k.wrapping_mul(6364136223846793005).wrapping_add(1); k >> 63 == 1 });
        let (h, _) = delete_below_relative(&sub, &g, 3.0);
        // deletions total at most Σ_T d_G(T)/(2cr) = e(G)/(2c)
        prop_assert!(6 * (sub.edge_count() - h.edge_count()) <= g.edge_count());
    }

    #[test]
    fn regularization_keeps_half(g in partite(), seed in 0u64..4) {
        prop_assume!(g.edge_count() > 0);
        let reg = find_regular_subgraph(&g, &RegularizeOptions { seed, ..RegularizeOptions::new(2, 0.1) }).unwrap();
        prop_assert!(2 * reg.subgraph.edge_count() >= reg.bucketed.edge_count());
        prop_assert!(reg.bucketed.is_subgraph_of(&g));
    }
}

#[test]
fn star_is_a_lower_bound() {
    let params = PatternParams::new(3, 2, 2).unwrap();
    let mut last = 0;
    for n in 4..=7 {
        let star = construct_star(n, 3).unwrap();
        assert!(is_kst_free(&star, params).unwrap());
        assert!(find_erdos_quadruple(&star).is_none());
        let ex = turan_exact(n, params, SearchMode::All, SearchOptions::default()).unwrap();
        assert!(ex.exhaustive);
        assert!(star.edge_count() <= ex.value);
        assert!(last <= ex.value, "monotone in n");
        last = ex.value;
        for w in &ex.witnesses {
            assert_eq!(w.edge_count(), ex.value);
            assert!(is_kst_free(w, params).unwrap());
        }
    }
}

#[test]
fn four_uniform_inequality() {
    // f_4(n) ≤ ex(n, K_{2,2}^{(4)}): a K_{2,2}^{(4)} copy is a quadruple
    let params = PatternParams::new(4, 2, 2).unwrap();
    for n in 4..=7 {
        let f = extremal::erdos_fr_exact(n, 4, SearchOptions::default()).unwrap();
        let ex = turan_exact(n, params, SearchMode::All, SearchOptions::default()).unwrap();
        if f.exhaustive && ex.exhaustive {
            assert!(f.value <= ex.value, "n = {n}: {} > {}", f.value, ex.value);
        }
    }
}

#[test]
fn partite_values_are_monotone_in_t() {
    let mut prev = 0;
    for t in 1..=3 {
        let res = turan_exact(3, PatternParams::new(3, 2, t).unwrap(), SearchMode::Partite, SearchOptions::default()).unwrap();
        assert!(res.exhaustive);
        assert!(res.value >= prev);
        prev = res.value;
    }
}

#[test]
fn every_vertex_minimum_cover_is_valid() {
    let g = Hypergraph::complete_partite(vec![3, 3, 3]).unwrap();
    let cn = common_neighborhood(&g, &[0 as Vertex, 1]).unwrap();
    assert_eq!(cn.len(), 9);
    assert_eq!(minimum_vertex_cover(&cn).len(), 3);
}
