//! Brute-force measurement oracle and random small graphs, shared by the
//! integration tests.

#![allow(dead_code, clippy::needless_range_loop)]

use gencat_core::{AttributedGraph, Labels, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Everything the stats module measures, recomputed from a dense adjacency
/// matrix by enumerating node pairs.
pub struct OracleStats {
    pub mean: Matrix,
    pub deviation: Matrix,
    pub attr_class_corr: Matrix,
    pub proportions: Vec<f64>,
    pub intra_edges: usize,
    pub inter_edges: usize,
    pub intra_density: f64,
    pub inter_density: f64,
    pub components: usize,
    pub largest_component: usize,
    pub path_length: f64,
}

pub fn dense_adjacency(g: &AttributedGraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for &(i, j) in g.edges() {
        a[i as usize][j as usize] = true;
        a[j as usize][i as usize] = true;
    }
    a
}

pub fn oracle(g: &AttributedGraph) -> OracleStats {
    let n = g.node_count();
    let k = g.class_count();
    let a = dense_adjacency(g);
    let class = |i: usize| g.labels().class_index(i);

    let mut mean = Matrix::zeros(k, k);
    let mut deviation = Matrix::zeros(k, k);
    for l in 0..k {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for i in (0..n).filter(|&i| class(i) == l) {
            let deg = (0..n).filter(|&j| a[i][j]).count();
            if deg == 0 {
                continue;
            }
            let mut row = vec![0.0; k];
            for j in (0..n).filter(|&j| a[i][j]) {
                row[class(j)] += 1.0;
            }
            rows.push(row.into_iter().map(|c| c / deg as f64).collect());
        }
        for h in 0..k {
            if rows.is_empty() {
                mean.set(l, h, f64::NAN);
                deviation.set(l, h, f64::NAN);
                continue;
            }
            let mu = rows.iter().map(|r| r[h]).sum::<f64>() / rows.len() as f64;
            let var = rows.iter().map(|r| (r[h] - mu).powi(2)).sum::<f64>() / rows.len() as f64;
            mean.set(l, h, mu);
            deviation.set(l, h, var.sqrt());
        }
    }

    let d = g.attribute_count();
    let x = g.attributes();
    let mut attr_class_corr = Matrix::zeros(d, k);
    for delta in 0..d {
        for l in 0..k {
            let members: Vec<usize> = (0..n).filter(|&i| class(i) == l).collect();
            let s: f64 = members.iter().map(|&i| x.get(i, delta)).sum();
            attr_class_corr.set(delta, l, s / members.len() as f64);
        }
    }
    let proportions = (0..k)
        .map(|l| (0..n).filter(|&i| class(i) == l).count() as f64 / n as f64)
        .collect();

    let (mut intra_edges, mut inter_edges, mut intra_pairs, mut inter_pairs) = (0, 0, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let same = class(i) == class(j);
            if same {
                intra_pairs += 1;
            } else {
                inter_pairs += 1;
            }
            if a[i][j] {
                if same {
                    intra_edges += 1;
                } else {
                    inter_edges += 1;
                }
            }
        }
    }
    let ratio = |e: usize, p: u64| if p == 0 { 0.0 } else { e as f64 / p as f64 };

    // Floyd-Warshall distances
    let inf = usize::MAX / 4;
    let mut dist = vec![vec![inf; n]; n];
    for i in 0..n {
        dist[i][i] = 0;
        for j in 0..n {
            if a[i][j] {
                dist[i][j] = 1;
            }
        }
    }
    for via in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = dist[i][via] + dist[via][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }
    // components: nodes grouped by reachability, listed by smallest member;
    // the largest one wins, ties to the one with the smaller first node
    let mut seen = vec![false; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&j| dist[i][j] < inf).collect();
        comp.iter().for_each(|&j| seen[j] = true);
        comps.push(comp);
    }
    let mut lcc = &comps[0];
    for c in &comps {
        if c.len() > lcc.len() {
            lcc = c;
        }
    }
    let path_length = if lcc.len() < 2 {
        0.0
    } else {
        let total: usize = lcc
            .iter()
            .flat_map(|&s| lcc.iter().map(move |&t| (s, t)))
            .map(|(s, t)| dist[s][t])
            .sum();
        total as f64 / (lcc.len() * (lcc.len() - 1)) as f64
    };

    OracleStats {
        mean,
        deviation,
        attr_class_corr,
        proportions,
        intra_edges,
        inter_edges,
        intra_density: ratio(intra_edges, intra_pairs),
        inter_density: ratio(inter_edges, inter_pairs),
        components: comps.len(),
        largest_component: lcc.len(),
        path_length,
    }
}

/// Random labeled graph with `n` in [2, max_n], every class non-empty,
/// edge probability drawn per graph, and `d` uniform attributes.
pub fn random_graph(seed: u64, max_n: usize) -> AttributedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_n);
    let k = rng.random_range(1..=n.min(5));
    let d = rng.random_range(0..=3);
    let p: f64 = rng.random_range(0.0..0.5);
    // first k nodes cover every class, the rest are random
    let mut classes: Vec<usize> = (0..k).collect();
    classes.extend((k..n).map(|_| rng.random_range(0..k)));
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        classes.swap(i, j);
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i as u32, j as u32));
            }
        }
    }
    let attributes = Matrix::from_fn(n, d, |_, _| rng.random::<f64>());
    AttributedGraph::new(n, k, edges, attributes, Labels::from_class_indices(classes))
        .expect("valid random graph")
}

/// Largest entrywise difference, treating NaN == NaN as equal and NaN vs a
/// number as infinitely far apart.
pub fn nan_aware_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| match (x.is_nan(), y.is_nan()) {
            (true, true) => 0.0,
            (false, false) => (x - y).abs(),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// Largest difference between the stats module and the oracle on `g`;
/// counts that disagree give infinity.
pub fn stats_vs_oracle(g: &AttributedGraph) -> f64 {
    use gencat_core::stats::{
        attribute_class_correlation, class_preference, class_proportions, community_stats,
    };
    let o = oracle(g);
    let pref = class_preference(g).expect("classes are non-empty");
    let h = attribute_class_correlation(g).expect("classes are non-empty");
    let c = community_stats(g, 0);
    let mut worst = nan_aware_diff(&pref.mean, &o.mean)
        .max(nan_aware_diff(&pref.deviation, &o.deviation))
        .max(nan_aware_diff(&h, &o.attr_class_corr));
    for (a, b) in class_proportions(g).iter().zip(&o.proportions) {
        worst = worst.max((a - b).abs());
    }
    worst = worst
        .max((c.intra_density - o.intra_density).abs())
        .max((c.inter_density - o.inter_density).abs())
        .max((c.characteristic_path_length - o.path_length).abs());
    let counts_match = c.intra_edges == o.intra_edges
        && c.inter_edges == o.inter_edges
        && c.components == o.components
        && c.largest_component == o.largest_component
        && c.path_length_exact;
    if counts_match {
        worst
    } else {
        f64::INFINITY
    }
}
