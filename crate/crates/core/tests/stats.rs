mod common;

use common::{nan_aware_diff, random_graph, stats_vs_oracle};
use gencat_core::stats::{
    class_preference, class_size_loss, community_stats, extract_params, measure_class_features,
};
use gencat_core::{AttributedGraph, Labels, Matrix};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two triangles joined by one edge; nodes 0-2 are class 1, 3-5 class 2.
fn two_triangles() -> AttributedGraph {
    let edges = vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)];
    let labels = Labels::from_class_indices([0, 0, 0, 1, 1, 1]);
    AttributedGraph::new(6, 2, edges, Matrix::zeros(6, 0), labels).unwrap()
}

#[test]
fn two_triangles_by_hand() {
    let g = two_triangles();
    let pref = class_preference(&g).unwrap();
    // class 1: rows (1, 0), (1, 0), (2/3, 1/3)
    let m11 = (1.0 + 1.0 + 2.0 / 3.0) / 3.0;
    assert!((pref.mean.get(0, 0) - m11).abs() < 1e-15);
    assert!((pref.mean.get(0, 1) - (1.0 - m11)).abs() < 1e-15);
    let var = (2.0 * (1.0 - m11).powi(2) + (2.0 / 3.0 - m11).powi(2)) / 3.0;
    assert!((pref.deviation.get(0, 0) - var.sqrt()).abs() < 1e-15);
    assert_eq!(pref.mean.get(1, 1), pref.mean.get(0, 0));

    let c = community_stats(&g, 0);
    assert_eq!((c.intra_edges, c.inter_edges), (6, 1));
    assert!((c.intra_density - 1.0).abs() < 1e-15);
    assert!((c.inter_density - 1.0 / 9.0).abs() < 1e-15);
    assert_eq!((c.components, c.largest_component), (1, 6));
    let o = common::oracle(&g);
    assert!((c.characteristic_path_length - o.path_length).abs() < 1e-15);
}

#[test]
fn isolated_nodes_do_not_count_and_empty_classes_are_nan() {
    let labels = Labels::from_class_indices([0, 0, 1, 2]);
    let g = AttributedGraph::new(4, 3, vec![(0, 2)], Matrix::zeros(4, 0), labels).unwrap();
    let pref = class_preference(&g).unwrap();
    // node 1 is isolated, so class 1's only row is node 0's (0, 1, 0)
    assert_eq!(pref.mean.row(0), &[0.0, 1.0, 0.0]);
    assert_eq!(pref.deviation.row(0), &[0.0, 0.0, 0.0]);
    assert!(pref.mean.row(2).iter().all(|v| v.is_nan()));
    let report = measure_class_features(&g).unwrap();
    assert_eq!(report.isolated_per_class, vec![1, 0, 1]);
    assert_eq!(report.undefined_rows, vec![3]);
}

#[test]
fn class_size_loss_is_zero_on_target() {
    let g = two_triangles();
    assert!(class_size_loss(&[0.5, 0.5], &g).unwrap() < 1e-15);
    assert!(class_size_loss(&[0.9, 0.1], &g).unwrap() > 0.1);
}

#[test]
fn oracle_agrees_on_many_small_graphs() {
    for seed in 0..300 {
        let g = random_graph(seed, 40);
        assert!(stats_vs_oracle(&g) <= 1e-12, "seed {seed}");
    }
}

/// Renumbers nodes by `order` (new id of old node `i` is `order[i]`) and
/// classes by `class_map`.
fn relabel(g: &AttributedGraph, order: &[usize], class_map: &[usize]) -> AttributedGraph {
    let n = g.node_count();
    let edges = g
        .edges()
        .iter()
        .map(|&(i, j)| (order[i as usize] as u32, order[j as usize] as u32))
        .collect();
    let mut classes = vec![0; n];
    let d = g.attribute_count();
    let mut attrs = Matrix::zeros(n, d);
    for i in 0..n {
        classes[order[i]] = class_map[g.labels().class_index(i)];
        for delta in 0..d {
            attrs.set(order[i], delta, g.attributes().get(i, delta));
        }
    }
    AttributedGraph::new(
        n,
        g.class_count(),
        edges,
        attrs,
        Labels::from_class_indices(classes),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn stats_match_oracle(seed in any::<u64>()) {
        let g = random_graph(seed, 30);
        prop_assert!(stats_vs_oracle(&g) <= 1e-12);
    }

    #[test]
    fn node_order_does_not_matter(seed in any::<u64>()) {
        let g = random_graph(seed, 30);
        let mut order: Vec<usize> = (0..g.node_count()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let identity: Vec<usize> = (0..g.class_count()).collect();
        let h = relabel(&g, &order, &identity);
        let (a, b) = (class_preference(&g).unwrap(), class_preference(&h).unwrap());
        prop_assert!(nan_aware_diff(&a.mean, &b.mean) < 1e-12);
        prop_assert!(nan_aware_diff(&a.deviation, &b.deviation) < 1e-12);
        let (ca, cb) = (community_stats(&g, 0), community_stats(&h, 0));
        prop_assert_eq!((ca.intra_edges, ca.inter_edges), (cb.intra_edges, cb.inter_edges));
        prop_assert_eq!((ca.components, ca.largest_component), (cb.components, cb.largest_component));
        // tied largest components are picked by node id, so only a unique
        // one is order-free
        if 2 * ca.largest_component > g.node_count() {
            prop_assert!((ca.characteristic_path_length - cb.characteristic_path_length).abs() < 1e-12);
        }
    }

    #[test]
    fn class_permutation_permutes_matrices(seed in any::<u64>()) {
        let g = random_graph(seed, 30);
        let k = g.class_count();
        let mut class_map: Vec<usize> = (0..k).collect();
        class_map.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 2));
        let order: Vec<usize> = (0..g.node_count()).collect();
        let h = relabel(&g, &order, &class_map);
        let (a, b) = (class_preference(&g).unwrap(), class_preference(&h).unwrap());
        let permuted = |m: &Matrix| Matrix::from_fn(k, k, |l, c| {
            // entry (pi(l), pi(c)) of the relabeled graph is (l, c) of the original
            let inv_l = class_map.iter().position(|&x| x == l).unwrap();
            let inv_c = class_map.iter().position(|&x| x == c).unwrap();
            m.get(inv_l, inv_c)
        });
        prop_assert!(nan_aware_diff(&b.mean, &permuted(&a.mean)) < 1e-12);
        prop_assert!(nan_aware_diff(&b.deviation, &permuted(&a.deviation)) < 1e-12);
    }

    #[test]
    fn extracted_params_are_valid(seed in any::<u64>()) {
        let g = random_graph(seed, 30);
        prop_assume!(g.edge_count() > 0);
        let p = extract_params(&g).unwrap();
        let cfg = p.to_config(7);
        prop_assert!(cfg.validate().is_ok());
    }
}
