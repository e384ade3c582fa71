//! Invariants that must hold for any input.

use std::collections::BTreeMap;

use mesonet_core::cluster::{codelength, detect_communities, Clustering};
use mesonet_core::cohort::{cluster_activity, shares};
use mesonet_core::geo::{continent_affiliation, Continent, CountryTable, GeoLabel};
use mesonet_core::graph::{time_slices, AuthorNode, CoauthorNetwork};
use mesonet_core::ingest::{filter_corpus, key, Corpus, PublicationRecord, YearSpan};
use mesonet_core::meso::{separator_size, BridgeEdge};
use mesonet_core::metrics::{assign_role, node_profiles, DegreeMode};
use mesonet_core::stats::{chi_square, pearson_r, ContingencyTable};
use proptest::prelude::*;

const POOL: [&str; 10] = ["ABEL_A", "BAKER_B", "COLE_C", "DAVIS_D", "EVANS_E", "FOX_F", "GRAY_G", "HILL_H", "IVES_I", "Anon"];

fn records() -> impl Strategy<Value = Vec<PublicationRecord>> {
    proptest::collection::vec(
        (1990i32..2000, proptest::collection::vec(0usize..POOL.len(), 0..5), 0u32..4),
        0..25,
    )
    .prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (year, authors, refs))| {
                PublicationRecord::new(format!("R{i}"), year, authors.into_iter().map(|a| key(POOL[a])), ["GERMANY".to_string()], refs)
            })
            .collect()
    })
}

fn graph(n: usize, edges: &[(usize, usize)]) -> CoauthorNetwork {
    let nodes = (0..n).map(|i| AuthorNode::bare(key(&format!("N{i:03}")))).collect();
    CoauthorNetwork::from_parts(nodes, edges.iter().map(|&(a, b)| (a, b, 1))).unwrap()
}

fn simple_edges(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 1..3 * n).prop_map(move |raw| {
            let mut e: Vec<(usize, usize)> =
                raw.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
            e.sort_unstable();
            e.dedup();
            (n, e)
        })
    })
}

/// A connected graph: a random spanning tree plus extra edges.
fn connected_edges(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (3usize..=max_n).prop_flat_map(|n| {
        (proptest::collection::vec(any::<prop::sample::Index>(), n - 1), proptest::collection::vec((0..n, 0..n), 0..2 * n))
            .prop_map(move |(parents, extra)| {
                let mut e: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
                e.extend(extra.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))));
                e.sort_unstable();
                e.dedup();
                (n, e)
            })
    })
}

fn clustered() -> impl Strategy<Value = (CoauthorNetwork, Clustering)> {
    simple_edges(14).prop_flat_map(|(n, e)| {
        proptest::collection::vec(0u8..4, n).prop_map(move |labels| {
            let net = graph(n, &e);
            let cl = Clustering::from_labels(&net, &labels, 0).unwrap();
            (net, cl)
        })
    })
}

fn bridges() -> impl Strategy<Value = Vec<BridgeEdge>> {
    proptest::collection::btree_set((0usize..6, 100usize..106), 1..20)
        .prop_map(|s| s.into_iter().map(|(a, b)| BridgeEdge { a, b, weight: 1 }).collect())
}

fn table() -> CountryTable {
    [("GERMANY", Continent::Europe), ("FRANCE", Continent::Europe), ("CHINA", Continent::Asia), ("JAPAN", Continent::Asia), ("USA", Continent::NorthAmerica)]
        .into_iter()
        .map(|(c, k)| (c.to_string(), k))
        .collect()
}

proptest! {
    #[test]
    fn filtering_is_idempotent_and_never_grows(recs in records()) {
        let n = recs.len();
        let (once, report) = filter_corpus(recs);
        prop_assert!(once.len() <= n);
        prop_assert_eq!(report.kept + report.too_few_authors + report.single_reference, n);
        let (twice, _) = filter_corpus(once.records.clone());
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn edge_weights_count_author_pairs(recs in records()) {
        let (corpus, _) = filter_corpus(recs);
        let net = CoauthorNetwork::build(&corpus);
        let pairs: u64 = corpus.records.iter().map(|r| (r.authors.len() * (r.authors.len() - 1) / 2) as u64).sum();
        prop_assert_eq!(net.total_weight(), pairs);
        for i in 0..net.node_count() {
            prop_assert_eq!(net.node(i).paper_count as usize, corpus.records.iter().filter(|r| r.authors.contains(&net.node(i).key)).count());
        }
    }

    #[test]
    fn giant_component_is_a_fixed_point((n, e) in simple_edges(14)) {
        let net = graph(n, &e);
        let g = net.giant_component().unwrap();
        prop_assert!(g.network.is_connected());
        let again = g.network.giant_component().unwrap();
        prop_assert_eq!(again.relative_size, 1.0);
        prop_assert_eq!(again.network, g.network);
    }

    #[test]
    fn growth_is_monotone(recs in records()) {
        let (corpus, _) = filter_corpus(recs);
        prop_assume!(corpus.time_span.is_some_and(|s| s.years() >= 3));
        let curve = mesonet_core::graph::growth_curve(&corpus, 3).unwrap();
        prop_assert!(curve.windows(2).all(|w| w[0].authors <= w[1].authors));
        prop_assert_eq!(curve.last().unwrap().authors, corpus.authors().len());
    }

    #[test]
    fn role_profiles_are_consistent((net, cl) in clustered()) {
        let profiles = node_profiles(&net, &cl, DegreeMode::Unweighted).unwrap();
        for (i, p) in profiles.iter().enumerate() {
            prop_assert_eq!(p.degree, net.degree(i) as f64);
            let external = net.neighbors(i).iter().filter(|&&(j, _)| cl.cluster_of(j as usize) != p.cluster).count();
            prop_assert_eq!(p.internal_degree + external as f64, p.degree);
            prop_assert!((0.0..=1.0).contains(&p.participation));
            let mut reached: Vec<u32> = net.neighbors(i).iter().map(|&(j, _)| cl.cluster_of(j as usize)).collect();
            reached.sort_unstable();
            reached.dedup();
            prop_assert_eq!(p.participation == 0.0, reached.len() <= 1);
            if external == 0 {
                prop_assert_eq!(p.participation, 0.0);
            }
            prop_assert_eq!(p.role, assign_role(p.z, p.participation).unwrap());
        }
        for members in cl.members() {
            let z: Vec<f64> = members.iter().map(|&i| profiles[i].z).collect();
            let m = z.iter().sum::<f64>() / z.len() as f64;
            let v = z.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / z.len() as f64;
            prop_assert!(m.abs() < 1e-9);
            prop_assert!(v.abs() < 1e-9 || (v - 1.0).abs() < 1e-9, "variance {}", v);
        }
    }

    #[test]
    fn every_point_has_exactly_one_role(z in -10.0f64..10.0, p in 0.0f64..=1.0) {
        prop_assert!(assign_role(z, p).is_ok());
    }

    #[test]
    fn unit_separator_means_a_shared_endpoint(b in bridges()) {
        let shared = b.iter().all(|e| e.a == b[0].a) || b.iter().all(|e| e.b == b[0].b);
        prop_assert_eq!(separator_size(&b) == 1, shared);
    }

    #[test]
    fn deleting_bridge_edges_never_grows_the_separator(b in bridges(), drop in any::<prop::sample::Index>()) {
        prop_assume!(b.len() > 1);
        let mut fewer = b.clone();
        fewer.remove(drop.index(b.len()));
        prop_assert!(separator_size(&fewer) <= separator_size(&b));
    }

    #[test]
    fn pearson_symmetry_and_affine_invariance(
        xy in proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..30),
        scale in 0.1f64..10.0,
        shift in -50.0f64..50.0,
    ) {
        let x: Vec<f64> = xy.iter().map(|p| p.0).collect();
        let y: Vec<f64> = xy.iter().map(|p| p.1).collect();
        let Ok(r) = pearson_r(&x, &y) else { return Ok(()); };
        prop_assert!((pearson_r(&y, &x).unwrap() - r).abs() < 1e-12);
        let moved: Vec<f64> = x.iter().map(|v| scale * v + shift).collect();
        prop_assert!((pearson_r(&moved, &y).unwrap() - r).abs() < 1e-9);
        let flipped: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert!((pearson_r(&flipped, &y).unwrap() + r).abs() < 1e-12);
    }

    #[test]
    fn chi_square_ignores_row_and_column_order(counts in proptest::collection::vec(proptest::collection::vec(1u64..50, 3), 2..5)) {
        let a = chi_square(&ContingencyTable::from_counts(counts.clone()).unwrap());
        let mut permuted: Vec<Vec<u64>> = counts.iter().rev().map(|r| r.iter().rev().copied().collect()).collect();
        permuted.rotate_left(1);
        let b = chi_square(&ContingencyTable::from_counts(permuted).unwrap());
        prop_assert!((a.statistic - b.statistic).abs() <= 1e-9 * a.statistic.max(1.0));
        prop_assert_eq!(a.df, b.df);
    }

    #[test]
    fn geo_label_is_scale_invariant(counts in proptest::collection::btree_map(prop::sample::select(vec!["GERMANY", "FRANCE", "CHINA", "JAPAN", "USA", "MARS"]), 1u64..40, 0..6), k in 1u64..20) {
        let t = table();
        let base: BTreeMap<String, u64> = counts.iter().map(|(c, &n)| (c.to_string(), n)).collect();
        let scaled: BTreeMap<String, u64> = base.iter().map(|(c, &n)| (c.clone(), n * k)).collect();
        prop_assert_eq!(continent_affiliation(&base, &t), continent_affiliation(&scaled, &t));
    }

    #[test]
    fn mixed_labels_do_not_depend_on_which_continent_leads(a in 1u64..50, b in 1u64..50) {
        let t = table();
        let forward: BTreeMap<String, u64> = [("CHINA".to_string(), a), ("USA".to_string(), b)].into();
        let backward: BTreeMap<String, u64> = [("CHINA".to_string(), b), ("USA".to_string(), a)].into();
        let (l1, l2) = (continent_affiliation(&forward, &t), continent_affiliation(&backward, &t));
        prop_assert_eq!(matches!(l1, GeoLabel::Mixed(..)), matches!(l2, GeoLabel::Mixed(..)));
        if let GeoLabel::Mixed(..) = l1 {
            prop_assert_eq!(l1, l2);
        }
    }

    #[test]
    fn clustering_is_deterministic_and_beats_trivial_partitions((n, e) in connected_edges(20), seed in any::<u64>()) {
        let net = graph(n, &e);
        let a = detect_communities(&net, seed, 3).unwrap();
        let b = detect_communities(&net, seed, 3).unwrap();
        prop_assert_eq!(&a, &b);
        let singletons: Vec<u32> = (0..n as u32).collect();
        prop_assert!(a.quality() <= codelength(&net, &singletons) + 1e-12);
        prop_assert!(a.quality() <= codelength(&net, &vec![0; n]) + 1e-12);
        prop_assert!(a.check_connected(&net).is_ok());
    }

    #[test]
    fn cluster_activity_ignores_member_order(recs in records(), rot in 0usize..10) {
        let (corpus, _) = filter_corpus(recs);
        prop_assume!(corpus.time_span.is_some_and(|s| s.years() >= 3));
        let net = CoauthorNetwork::build(&corpus);
        let slices = time_slices(corpus.time_span.unwrap(), 3).unwrap();
        let mut members: Vec<usize> = (0..net.node_count()).collect();
        let before = cluster_activity(&net, &members, &slices);
        members.reverse();
        let len = members.len().max(1);
        members.rotate_left(rot % len);
        prop_assert_eq!(cluster_activity(&net, &members, &slices), before);
    }

    #[test]
    fn shares_sum_to_one(counts in proptest::array::uniform4(0usize..1000)) {
        let s = shares(counts);
        let total: f64 = s.iter().sum();
        if counts.iter().sum::<usize>() == 0 {
            prop_assert_eq!(total, 0.0);
        } else {
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn spans_cover_their_records() {
    let recs = vec![PublicationRecord::new("a", 1995, [key("X_A"), key("Y_B")], [], 3)];
    let c = Corpus::new(recs);
    assert_eq!(c.time_span, Some(YearSpan::new(1995, 1995)));
}
