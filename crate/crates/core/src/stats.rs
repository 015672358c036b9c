//! Measurements on labeled graphs: class features, losses against targets,
//! community statistics, and parameter extraction for reproduction.

use std::collections::VecDeque;

use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    Adjacency, AttributedGraph, ClassFeatureReport, ClassSizeMode, DegreeSpec, GeneratorConfig,
    Matrix,
};
use crate::rng::{stream_rng, Stream};

/// Above this many nodes the characteristic path length is estimated from
/// sampled sources.
pub const EXACT_PATH_LENGTH_MAX_NODES: usize = 5000;
pub const PATH_LENGTH_SAMPLE_SOURCES: usize = 1000;

/// Per-node fraction of neighbours in each class; `None` for degree 0.
fn node_fractions(graph: &AttributedGraph, adj: &Adjacency, i: usize) -> Option<Vec<f64>> {
    let deg = adj.degree(i);
    if deg == 0 {
        return None;
    }
    let labels = graph.labels();
    let mut counts = vec![0usize; graph.class_count()];
    for &j in adj.neighbors(i) {
        counts[labels.class_index(j as usize)] += 1;
    }
    Some(counts.into_iter().map(|c| c as f64 / deg as f64).collect())
}

fn nonempty_members(graph: &AttributedGraph) -> Result<Vec<Vec<usize>>> {
    let members = graph.labels().members(graph.class_count());
    if let Some(l) = members.iter().position(Vec::is_empty) {
        return Err(Error::EmptyClass(l + 1));
    }
    Ok(members)
}

/// Class preference mean and deviation of a graph. Rows of classes whose
/// nodes are all isolated are NaN and listed in `undefined_rows`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPreference {
    pub mean: Matrix,
    pub deviation: Matrix,
    pub isolated_per_class: Vec<usize>,
    pub undefined_rows: Vec<usize>,
}

/// Mean and population standard deviation of the per-node class fractions,
/// excluding degree-0 nodes.
pub fn class_preference(graph: &AttributedGraph) -> Result<ClassPreference> {
    let k = graph.class_count();
    let members = nonempty_members(graph)?;
    let adj = graph.adjacency();
    let rows: Vec<(Vec<f64>, Vec<f64>, usize)> = members
        .par_iter()
        .map(|nodes| {
            let fractions: Vec<Vec<f64>> = nodes
                .iter()
                .filter_map(|&i| node_fractions(graph, &adj, i))
                .collect();
            let isolated = nodes.len() - fractions.len();
            if fractions.is_empty() {
                return (vec![f64::NAN; k], vec![f64::NAN; k], isolated);
            }
            let count = fractions.len() as f64;
            let mut mean = vec![0.0; k];
            for f in &fractions {
                mean.iter_mut().zip(f).for_each(|(m, v)| *m += v);
            }
            mean.iter_mut().for_each(|m| *m /= count);
            let mut var = vec![0.0; k];
            for f in &fractions {
                for h in 0..k {
                    let diff = f[h] - mean[h];
                    var[h] += diff * diff;
                }
            }
            let dev = var.into_iter().map(|v| (v / count).sqrt()).collect();
            (mean, dev, isolated)
        })
        .collect();

    let mut mean = Matrix::zeros(k, k);
    let mut deviation = Matrix::zeros(k, k);
    let mut isolated_per_class = Vec::with_capacity(k);
    let mut undefined_rows = Vec::new();
    for (l, (m, d, iso)) in rows.into_iter().enumerate() {
        if m[0].is_nan() {
            undefined_rows.push(l + 1);
        }
        mean.row_mut(l).copy_from_slice(&m);
        deviation.row_mut(l).copy_from_slice(&d);
        isolated_per_class.push(iso);
    }
    Ok(ClassPreference {
        mean,
        deviation,
        isolated_per_class,
        undefined_rows,
    })
}

fn strict(pref: ClassPreference) -> Result<ClassPreference> {
    match pref.undefined_rows.first() {
        Some(&l) => Err(Error::AllIsolatedClass(l)),
        None => Ok(pref),
    }
}

/// Class preference mean `M` (k x k).
pub fn class_preference_mean(graph: &AttributedGraph) -> Result<Matrix> {
    Ok(strict(class_preference(graph)?)?.mean)
}

/// Class preference deviation `D` (k x k).
pub fn class_preference_deviation(graph: &AttributedGraph) -> Result<Matrix> {
    Ok(strict(class_preference(graph)?)?.deviation)
}

/// Attribute-class correlation `H` (d x k): per-class attribute means.
pub fn attribute_class_correlation(graph: &AttributedGraph) -> Result<Matrix> {
    let members = nonempty_members(graph)?;
    let x = graph.attributes();
    let d = graph.attribute_count();
    Ok(Matrix::from_fn(d, graph.class_count(), |delta, l| {
        let nodes = &members[l];
        nodes.iter().map(|&i| x.get(i, delta)).sum::<f64>() / nodes.len() as f64
    }))
}

/// Realized class proportions `|Omega_l| / n`.
pub fn class_proportions(graph: &AttributedGraph) -> Vec<f64> {
    let n = graph.node_count() as f64;
    graph
        .labels()
        .class_counts(graph.class_count())
        .into_iter()
        .map(|c| c as f64 / n)
        .collect()
}

/// `sum_l (rho[l] - |Omega_l| / n)^2`.
pub fn class_size_loss(rho_target: &[f64], graph: &AttributedGraph) -> Result<f64> {
    if rho_target.len() != graph.class_count() {
        return Err(Error::BadShape {
            what: "class size distribution rho",
            expected: format!("{} entries", graph.class_count()),
            got: format!("{} entries", rho_target.len()),
        });
    }
    Ok(rho_target
        .iter()
        .zip(class_proportions(graph))
        .map(|(t, r)| (t - r) * (t - r))
        .sum())
}

/// All class features measured on `graph`. Isolated classes produce NaN rows
/// instead of an error.
pub fn measure_class_features(graph: &AttributedGraph) -> Result<ClassFeatureReport> {
    let pref = class_preference(graph)?;
    let attr_class_corr = if graph.attribute_count() > 0 {
        Some(attribute_class_correlation(graph)?)
    } else {
        None
    };
    Ok(ClassFeatureReport {
        mean: pref.mean,
        deviation: pref.deviation,
        class_sizes: class_proportions(graph),
        attr_class_corr,
        isolated_per_class: pref.isolated_per_class,
        undefined_rows: pref.undefined_rows,
    })
}

/// Losses of a realized graph against target `M` and `D`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanDeviationLosses {
    /// `||M_l - M_meas_l||^2` per class; NaN for undefined rows.
    pub mean_per_class: Vec<f64>,
    /// `||D_l - D_meas_l||^2` per class; NaN for undefined rows.
    pub deviation_per_class: Vec<f64>,
    /// Sum of `mean_per_class` over defined rows.
    pub mean_loss: f64,
    /// Sum of `deviation_per_class` over defined rows.
    pub deviation_loss: f64,
    /// Mean squared error over the entries of defined rows (all k^2 entries
    /// when every class has an edge).
    pub mean_mse: f64,
    pub deviation_mse: f64,
}

fn row_losses(target: &Matrix, measured: &Matrix) -> Vec<f64> {
    target
        .iter_rows()
        .zip(measured.iter_rows())
        .map(|(t, m)| t.iter().zip(m).map(|(a, b)| (a - b) * (a - b)).sum())
        .collect()
}

fn summarize(per_class: &[f64], k: usize) -> (f64, f64) {
    let defined: Vec<f64> = per_class.iter().copied().filter(|v| !v.is_nan()).collect();
    let sum: f64 = defined.iter().sum();
    let mse = if defined.is_empty() {
        f64::NAN
    } else {
        sum / (defined.len() * k) as f64
    };
    (sum, mse)
}

/// Losses of `M`/`D` measured on `graph` against targets.
pub fn mean_deviation_losses(
    mean_target: &Matrix,
    dev_target: &Matrix,
    graph: &AttributedGraph,
) -> Result<MeanDeviationLosses> {
    let k = graph.class_count();
    for (what, m) in [
        ("class preference mean M", mean_target),
        ("class preference deviation D", dev_target),
    ] {
        if m.shape() != (k, k) {
            return Err(Error::BadShape {
                what,
                expected: format!("{k}x{k}"),
                got: format!("{}x{}", m.rows(), m.cols()),
            });
        }
    }
    let pref = class_preference(graph)?;
    Ok(losses_against(
        mean_target,
        dev_target,
        &pref.mean,
        &pref.deviation,
    ))
}

/// Same as [`mean_deviation_losses`] for already measured matrices.
pub fn losses_against(
    mean_target: &Matrix,
    dev_target: &Matrix,
    mean_measured: &Matrix,
    dev_measured: &Matrix,
) -> MeanDeviationLosses {
    let k = mean_target.rows();
    let mean_per_class = row_losses(mean_target, mean_measured);
    let deviation_per_class = row_losses(dev_target, dev_measured);
    let (mean_loss, mean_mse) = summarize(&mean_per_class, k);
    let (deviation_loss, deviation_mse) = summarize(&deviation_per_class, k);
    MeanDeviationLosses {
        mean_per_class,
        deviation_per_class,
        mean_loss,
        deviation_loss,
        mean_mse,
        deviation_mse,
    }
}

/// Density, connectivity and path-length statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityStats {
    /// Intra-class edges over intra-class pairs; 0 when there are no pairs.
    pub intra_density: f64,
    pub intra_density_defined: bool,
    /// Inter-class edges over inter-class pairs; 0 when there are no pairs.
    pub inter_density: f64,
    pub inter_density_defined: bool,
    pub intra_edges: usize,
    pub inter_edges: usize,
    pub components: usize,
    pub largest_component: usize,
    /// Mean shortest-path length over reachable pairs in the largest
    /// component; 0 when it has a single node.
    pub characteristic_path_length: f64,
    /// Number of BFS sources used for the path length.
    pub path_length_sources: usize,
    pub path_length_exact: bool,
}

/// Component id per node and the size of each component.
fn components(adj: &Adjacency) -> (Vec<usize>, Vec<usize>) {
    let n = adj.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        comp[start] = id;
        queue.push_back(start);
        let mut size = 0;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &w in adj.neighbors(v) {
                let w = w as usize;
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    (comp, sizes)
}

/// Sum of BFS distances from `source` to every reachable node.
fn distance_sum(adj: &Adjacency, source: usize) -> u64 {
    let mut dist = vec![u32::MAX; adj.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    let mut total = 0u64;
    while let Some(v) = queue.pop_front() {
        let dv = dist[v];
        total += u64::from(dv);
        for &w in adj.neighbors(v) {
            let w = w as usize;
            if dist[w] == u32::MAX {
                dist[w] = dv + 1;
                queue.push_back(w);
            }
        }
    }
    total
}

fn pairs(size: usize) -> u64 {
    let s = size as u64;
    s * s.saturating_sub(1) / 2
}

/// Community statistics of `graph`. Path length sampling (for graphs above
/// [`EXACT_PATH_LENGTH_MAX_NODES`]) draws sources from `seed`.
pub fn community_stats(graph: &AttributedGraph, seed: u64) -> CommunityStats {
    let n = graph.node_count();
    let labels = graph.labels();
    let intra_edges = graph
        .edges()
        .iter()
        .filter(|&&(i, j)| labels.label(i as usize) == labels.label(j as usize))
        .count();
    let inter_edges = graph.edge_count() - intra_edges;
    let intra_pairs: u64 = labels
        .class_counts(graph.class_count())
        .into_iter()
        .map(pairs)
        .sum();
    let inter_pairs = pairs(n) - intra_pairs;
    let density = |edges: usize, pairs: u64| {
        if pairs == 0 {
            (0.0, false)
        } else {
            (edges as f64 / pairs as f64, true)
        }
    };
    let (intra_density, intra_density_defined) = density(intra_edges, intra_pairs);
    let (inter_density, inter_density_defined) = density(inter_edges, inter_pairs);

    let adj = graph.adjacency();
    let (comp, sizes) = components(&adj);
    let (lcc_id, largest_component) = sizes.iter().copied().enumerate().fold(
        (0, 0),
        |best, (id, s)| if s > best.1 { (id, s) } else { best },
    );
    let lcc: Vec<usize> = (0..n).filter(|&i| comp[i] == lcc_id).collect();

    let exact = n <= EXACT_PATH_LENGTH_MAX_NODES || lcc.len() <= PATH_LENGTH_SAMPLE_SOURCES;
    let sources: Vec<usize> = if exact {
        lcc.clone()
    } else {
        let mut rng = stream_rng(seed, Stream::Stats);
        let mut picked: Vec<usize> = index::sample(&mut rng, lcc.len(), PATH_LENGTH_SAMPLE_SOURCES)
            .into_iter()
            .map(|p| lcc[p])
            .collect();
        picked.sort_unstable();
        picked
    };
    let characteristic_path_length = if lcc.len() < 2 {
        0.0
    } else {
        let total: u64 = sources.par_iter().map(|&s| distance_sum(&adj, s)).sum();
        total as f64 / (sources.len() as f64 * (lcc.len() - 1) as f64)
    };

    CommunityStats {
        intra_density,
        intra_density_defined,
        inter_density,
        inter_density_defined,
        intra_edges,
        inter_edges,
        components: sizes.len(),
        largest_component,
        characteristic_path_length,
        path_length_sources: sources.len(),
        path_length_exact: exact,
    }
}

/// Topology statistics and class features of an input graph, ready to be
/// fed back into the generator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractedParams {
    pub n: usize,
    pub m: usize,
    /// Degree per node id.
    pub degrees: Vec<u32>,
    pub class_pref_mean: Matrix,
    pub class_pref_dev: Matrix,
    pub class_sizes: Vec<f64>,
    /// 1-based classes whose rows were undefined (all members isolated) and
    /// were replaced by a uniform mean row with zero deviation.
    pub substituted_rows: Vec<usize>,
}

/// Degrees, `M`, `D` and `rho` of a labeled graph.
pub fn extract_params(graph: &AttributedGraph) -> Result<ExtractedParams> {
    let k = graph.class_count();
    let pref = class_preference(graph)?;
    let (mut mean, mut deviation) = (pref.mean, pref.deviation);
    for &l in &pref.undefined_rows {
        mean.row_mut(l - 1).fill(1.0 / k as f64);
        deviation.row_mut(l - 1).fill(0.0);
    }
    Ok(ExtractedParams {
        n: graph.node_count(),
        m: graph.edge_count(),
        degrees: graph.degrees(),
        class_pref_mean: mean,
        class_pref_dev: deviation,
        class_sizes: class_proportions(graph),
        substituted_rows: pref.undefined_rows,
    })
}

impl ExtractedParams {
    /// Same class structure at a new size. The degree sequence is resampled
    /// by quantile from the original and scaled to the new mean degree
    /// `2 m' / n'`; nodes drawn from degree-0 quantiles stay at 0, all
    /// others are clamped to `[1, n' - 1]`.
    pub fn rescale(&self, new_n: usize, new_m: usize) -> Result<ExtractedParams> {
        if new_n < 2 {
            return Err(Error::OutOfRange {
                what: "rescaled n".into(),
                value: new_n as f64,
                range: ">= 2",
            });
        }
        let max = new_n * (new_n - 1) / 2;
        if new_m > max {
            return Err(Error::InfeasibleBudget {
                n: new_n,
                m: new_m,
                max,
            });
        }
        let k = self.class_sizes.len();
        if new_n < k {
            return Err(Error::Infeasible(format!(
                "{new_n} nodes cannot hold {k} non-empty classes"
            )));
        }
        let mut sorted = self.degrees.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let old_mean = 2.0 * self.m as f64 / self.n as f64;
        let new_mean = 2.0 * new_m as f64 / new_n as f64;
        let scale = if old_mean > 0.0 {
            new_mean / old_mean
        } else {
            0.0
        };
        let degrees = (0..new_n)
            .map(|i| {
                let q = (i as f64 + 0.5) / new_n as f64;
                let src = ((q * self.n as f64) as usize).min(self.n - 1);
                let d = sorted[src];
                if d == 0 {
                    0
                } else {
                    ((f64::from(d) * scale).round() as u32).clamp(1, new_n as u32 - 1)
                }
            })
            .collect();
        Ok(ExtractedParams {
            n: new_n,
            m: new_m,
            degrees,
            ..self.clone()
        })
    }

    /// Generator config reproducing these statistics, without attributes.
    /// The degrees are passed in descending order, the order edges are
    /// generated in; node ids of the input carry no meaning for the output.
    pub fn to_config(&self, seed: u64) -> GeneratorConfig {
        let mut cfg = GeneratorConfig::new(
            self.n,
            self.m,
            self.class_pref_mean.clone(),
            self.class_pref_dev.clone(),
        )
        .with_class_sizes(ClassSizeMode::Explicit {
            rho: self.class_sizes.clone(),
        })
        .with_seed(seed);
        let mut degrees = self.degrees.clone();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        cfg.degrees = DegreeSpec::Explicit { degrees };
        cfg
    }
}
