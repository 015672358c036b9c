//! Edge generation: a power-law degree plan fitted to the edge budget, then
//! per source node a class draw from its membership row and a target draw
//! from that class's connection column, under degree caps.

use std::collections::BinaryHeap;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{DegreePlan, Matrix, TargetSelection};

/// Lookup-table resolution: each class table has `TABLE_STEPS_PER_NODE * n`
/// entries, i.e. step `w = 1 / (100 n)`.
pub const TABLE_STEPS_PER_NODE: usize = 100;

/// Exponent grid for [`fit_degree_exponent`]: 1.00, 1.01, ..., 3.00.
pub fn exponent_grid() -> impl Iterator<Item = f64> {
    (0..=200).map(|j| f64::from(100 + j) / 100.0)
}

/// Quantile of a Pareto law with density proportional to `x^-exponent`,
/// truncated to `[1, upper]`.
fn truncated_pareto_quantile(q: f64, exponent: f64, upper: f64) -> f64 {
    let alpha = exponent - 1.0;
    if alpha.abs() < 1e-12 {
        // log-uniform limit
        upper.powf(q)
    } else {
        let tail = upper.powf(-alpha);
        (1.0 - q * (1.0 - tail)).powf(-1.0 / alpha)
    }
}

/// Degree of rank `i` (0 = largest) in [`power_law_degrees`].
fn ranked_degree(i: usize, n: usize, exponent: f64, upper: f64) -> u32 {
    let q = (n - i) as f64 - 0.5;
    let x = truncated_pareto_quantile(q / n as f64, exponent, upper).round();
    x.clamp(1.0, upper) as u32
}

/// `sum(power_law_degrees(n, exponent, cap)) / 2` without building the vector.
fn power_law_half_sum(n: usize, exponent: f64, cap: u32) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let upper = f64::from(cap.clamp(1, (n - 1) as u32));
    (0..n)
        .map(|i| f64::from(ranked_degree(i, n, exponent, upper)))
        .sum::<f64>()
        / 2.0
}

/// Largest expected degree used by the power-law plan.
///
/// The structural cutoff `ceil(sqrt(2m))`, raised to the smallest cap at
/// which the flattest sequence on the grid (exponent 1) can carry the budget,
/// and never above `n - 1`. Degrees near `n - 1` on a sparse graph cannot be
/// realized because too few partners keep spare capacity.
pub fn degree_cap(n: usize, m: usize) -> u32 {
    let max = n.saturating_sub(1).max(1) as u32;
    let start = ((2.0 * m as f64).sqrt().ceil() as u32).clamp(1, max);
    let carries = |cap: u32| power_law_half_sum(n, 1.0, cap) >= m as f64;
    if carries(start) {
        return start;
    }
    // the half-sum grows with the cap; find the first cap that carries m
    let (mut lo, mut hi) = (start + 1, max);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if carries(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Deterministic power-law degree sequence, sorted descending.
///
/// Degree `i` is the quantile at `(i + 0.5) / n` of a Pareto law with the
/// given exponent truncated to `[1, cap]`, rounded and floored at 1.
pub fn power_law_degrees(n: usize, exponent: f64, cap: u32) -> Vec<u32> {
    if n < 2 {
        return vec![0; n];
    }
    let upper = f64::from(cap.clamp(1, (n - 1) as u32));
    (0..n)
        .map(|i| ranked_degree(i, n, exponent, upper))
        .collect()
}

/// Exponent on the grid whose degree sequence best matches the edge budget,
/// `argmin |m - sum(theta) / 2|`, ties towards the smaller exponent.
pub fn fit_degree_exponent(n: usize, m: usize) -> Result<f64> {
    let max = n * n.saturating_sub(1) / 2;
    if n < 2 || m > max {
        return Err(Error::InfeasibleBudget { n, m, max });
    }
    if m == 0 {
        return Err(Error::OutOfRange {
            what: "m".into(),
            value: 0.0,
            range: ">= 1",
        });
    }
    let cap = degree_cap(n, m);
    let grid: Vec<f64> = exponent_grid().collect();
    let half_sum = |idx: usize| power_law_half_sum(n, grid[idx], cap);
    // The half-sum never increases with the exponent, so the best grid
    // point is next to the first one whose half-sum is at most m.
    let target = m as f64;
    let (mut lo, mut hi) = (0, grid.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if half_sum(mid) <= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let prefer_lower = lo == grid.len()
        || (lo > 0 && (half_sum(lo - 1) - target).abs() <= (target - half_sum(lo)).abs());
    let best = if prefer_lower { lo - 1 } else { lo };
    Ok(grid[best])
}

/// Degree plan for budget `m` from a fitted exponent. If the degrees sum
/// past `2m`, the largest ones are lowered one step at a time until they fit,
/// so the plan never asks for more than `m` edges.
pub fn build_degree_plan(n: usize, exponent: f64, m: usize) -> DegreePlan {
    let mut degrees = power_law_degrees(n, exponent, degree_cap(n, m));
    let total: u64 = degrees.iter().map(|&d| u64::from(d)).sum();
    let budget = 2 * m as u64;
    if total > budget {
        // among equal degrees the last index goes first, keeping the order
        let mut heap: BinaryHeap<(u32, usize)> =
            degrees.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        for _ in 0..total - budget {
            let (d, i) = heap
                .pop()
                .expect("total exceeds budget so a degree is positive");
            degrees[i] = d - 1;
            heap.push((d - 1, i));
        }
    }
    DegreePlan::new(degrees)
}

/// Degree plan from a user list; degrees above `n - 1` are capped.
pub fn degree_plan_from_list(degrees: &[u32]) -> DegreePlan {
    let cap = degrees.len().saturating_sub(1) as u32;
    DegreePlan::new(degrees.iter().map(|&d| d.min(cap)).collect())
}

/// `(1/n) sum |theta_i - theta'_i| / theta_i`.
pub fn degree_mape(expected: &[u32], actual: &[u32]) -> Result<f64> {
    if expected.len() != actual.len() {
        return Err(Error::BadShape {
            what: "degree vectors",
            expected: format!("{} entries", expected.len()),
            got: format!("{} entries", actual.len()),
        });
    }
    if let Some(i) = expected.iter().position(|&d| d == 0) {
        return Err(Error::ZeroExpectedDegree(i));
    }
    if expected.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = expected
        .iter()
        .zip(actual)
        .map(|(&t, &a)| (f64::from(t) - f64::from(a)).abs() / f64::from(t))
        .sum();
    Ok(total / expected.len() as f64)
}

fn normalized_column(connection: &Matrix, class: usize) -> Result<Vec<f64>> {
    let col = connection.column(class);
    let total: f64 = col.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroColumn(class + 1));
    }
    Ok(col.into_iter().map(|v| v / total).collect())
}

/// Inverse-CDF lookup table for one class: entry `c` holds the first node
/// whose cumulative weight exceeds `c * w`.
///
/// The entries are non-decreasing, so the table is kept run-length encoded:
/// node `j` fills entries `starts[j]..starts[j + 1]`, and `guide[b]` is the
/// entry at `b * steps_per_node`, from which a lookup scans forward. This
/// takes O(n) memory instead of O(steps_per_node * n) and returns exactly the
/// entries of the full table.
#[derive(Debug, Clone)]
pub struct TargetTable {
    len: usize,
    steps_per_node: usize,
    starts: Vec<u64>,
    guide: Vec<u32>,
}

impl TargetTable {
    /// Builds the table for column `class` of `U'` in O(n).
    pub fn build(connection: &Matrix, class: usize, steps_per_node: usize) -> Result<Self> {
        let p = normalized_column(connection, class)?;
        let n = p.len();
        let len = steps_per_node * n;
        let last_positive = p.iter().rposition(|&v| v > 0.0).expect("column has mass");
        let position = |c: u64| c as f64 / len as f64;
        let total = len as u64;

        // the entry moves past node j at the first c with c / len >= cdf_j
        let mut starts = vec![0u64; n + 1];
        let mut cdf = 0.0;
        for j in 0..n {
            starts[j + 1] = if j < last_positive {
                cdf += p[j];
                let mut c = ((cdf * len as f64).ceil().max(0.0) as u64).min(total);
                while c > 0 && position(c - 1) >= cdf {
                    c -= 1;
                }
                while c < total && position(c) < cdf {
                    c += 1;
                }
                c.max(starts[j])
            } else {
                total
            };
        }

        let mut guide = Vec::with_capacity(n);
        let mut node = 0;
        for b in 0..n {
            let c = (b * steps_per_node) as u64;
            while starts[node + 1] <= c {
                node += 1;
            }
            guide.push(node as u32);
        }
        Ok(TargetTable {
            len,
            steps_per_node,
            starts,
            guide,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Entry `c` of the table, `c < len()`.
    pub fn entry(&self, c: usize) -> usize {
        let mut node = self.guide[c / self.steps_per_node] as usize;
        while self.starts[node + 1] <= c as u64 {
            node += 1;
        }
        node
    }

    /// Node for a uniform draw `x` in [0, 1).
    pub fn lookup(&self, x: f64) -> usize {
        let c = ((x * self.len as f64) as usize).min(self.len - 1);
        self.entry(c)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.entry(rng.random_range(0..self.len))
    }
}

/// Builds one [`TargetTable`] per class (classes in parallel).
pub fn build_sampler_tables(connection: &Matrix) -> Result<Vec<TargetTable>> {
    (0..connection.cols())
        .into_par_iter()
        .map(|l| TargetTable::build(connection, l, TABLE_STEPS_PER_NODE))
        .collect()
}

/// Exact inverse CDF of one class column, sampled by binary search.
#[derive(Debug, Clone)]
pub struct CdfSampler {
    cumulative: Vec<f64>,
}

impl CdfSampler {
    pub fn build(connection: &Matrix, class: usize) -> Result<Self> {
        let p = normalized_column(connection, class)?;
        let mut acc = 0.0;
        let cumulative = p
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        Ok(CdfSampler { cumulative })
    }

    pub fn lookup(&self, x: f64) -> usize {
        let total = *self.cumulative.last().expect("non-empty");
        let idx = self.cumulative.partition_point(|&c| c <= x * total);
        idx.min(self.cumulative.len() - 1)
    }
}

enum TargetDraw {
    Table(Vec<TargetTable>),
    Cdf(Vec<CdfSampler>),
    Direct,
}

/// Counters collected during edge generation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct EdgeGenStats {
    pub class_draws: u64,
    pub rejected_self_loops: u64,
    pub rejected_duplicates: u64,
    pub rejected_full: u64,
    /// Source nodes that hit the round cap with degree left to fill.
    pub exhausted_sources: u64,
}

fn pick_class<R: Rng + ?Sized>(cumulative: &[f64], rng: &mut R) -> usize {
    let x = rng.random::<f64>() * cumulative[cumulative.len() - 1];
    cumulative
        .iter()
        .position(|&c| x < c)
        .unwrap_or(cumulative.len() - 1)
}

/// Accepted edges plus per-node neighbor slots sized by expected degree.
/// `mark[j] == i + 1` while `i` is the source and `j` is already adjacent to
/// it, which makes the duplicate check a single lookup.
struct EdgeSink {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    mark: Vec<u32>,
    stats: EdgeGenStats,
}

impl EdgeSink {
    fn new(plan: &DegreePlan) -> Self {
        let mut offsets = Vec::with_capacity(plan.len() + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for &e in plan.expected() {
            acc += e as usize;
            offsets.push(acc);
        }
        EdgeSink {
            offsets,
            neighbors: vec![0; acc],
            mark: vec![0; plan.len()],
            stats: EdgeGenStats::default(),
        }
    }

    /// Marks the current neighbors of the new source `i`.
    fn begin_source(&mut self, plan: &DegreePlan, i: usize) {
        let start = self.offsets[i];
        let stamp = i as u32 + 1;
        for &v in &self.neighbors[start..start + plan.actual()[i] as usize] {
            self.mark[v as usize] = stamp;
        }
    }

    fn try_add(&mut self, plan: &mut DegreePlan, i: usize, j: usize) {
        if i == j {
            self.stats.rejected_self_loops += 1;
        } else if !plan.has_room(i) || !plan.has_room(j) {
            self.stats.rejected_full += 1;
        } else if self.mark[j] == i as u32 + 1 {
            self.stats.rejected_duplicates += 1;
        } else {
            self.mark[j] = i as u32 + 1;
            self.neighbors[self.offsets[i] + plan.actual()[i] as usize] = j as u32;
            self.neighbors[self.offsets[j] + plan.actual()[j] as usize] = i as u32;
            plan.record_edge(i, j);
        }
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    fn into_edges(self, plan: &DegreePlan) -> Vec<(u32, u32)> {
        let total: usize = plan.actual().iter().map(|&d| d as usize).sum();
        let mut edges = Vec::with_capacity(total / 2);
        let mut upper = Vec::new();
        for (i, &d) in plan.actual().iter().enumerate() {
            let start = self.offsets[i];
            upper.clear();
            upper.extend(
                self.neighbors[start..start + d as usize]
                    .iter()
                    .filter(|&&v| v as usize > i),
            );
            upper.sort_unstable();
            edges.extend(upper.iter().map(|&v| (i as u32, v)));
        }
        edges
    }
}

/// Generates the edge set. Nodes are processed in plan order (descending
/// expected degree); each source gets at most `max_rounds` rounds, each
/// drawing as many classes as it still lacks edges (duplicates kept) and one
/// target per drawn class. A candidate `(i, j)` is kept iff `i != j`, the
/// edge is new, and both endpoints are below their expected degree.
///
/// Returns sorted edges `(i, j)` with `i < j`; `plan.actual()` holds the
/// realized degrees afterwards.
pub fn generate_edges<R: Rng + ?Sized>(
    membership: &Matrix,
    connection: &Matrix,
    plan: &mut DegreePlan,
    max_rounds: usize,
    selection: TargetSelection,
    rng: &mut R,
) -> Result<(Vec<(u32, u32)>, EdgeGenStats)> {
    let n = plan.len();
    let k = membership.cols();
    if membership.rows() != n || connection.shape() != membership.shape() {
        return Err(Error::BadShape {
            what: "membership / connection proportions",
            expected: format!("{n}x{k}"),
            got: format!("{:?} / {:?}", membership.shape(), connection.shape()),
        });
    }
    plan.reset_actual();
    let draw = match selection {
        TargetSelection::Table => TargetDraw::Table(build_sampler_tables(connection)?),
        TargetSelection::BinarySearch => TargetDraw::Cdf(
            (0..k)
                .map(|l| CdfSampler::build(connection, l))
                .collect::<Result<_>>()?,
        ),
        TargetSelection::Direct => TargetDraw::Direct,
    };

    let mut sink = EdgeSink::new(plan);
    let mut class_cdf = vec![0.0; k];
    let mut picks: Vec<usize> = Vec::new();
    let mut direct_weights: Vec<f64> = Vec::new();
    let mut direct_cdf: Vec<f64> = Vec::new();

    for i in 0..n {
        if !plan.has_room(i) {
            continue;
        }
        sink.begin_source(plan, i);
        let mut acc = 0.0;
        for (c, &u) in class_cdf.iter_mut().zip(membership.row(i)) {
            acc += u;
            *c = acc;
        }
        if let TargetDraw::Direct = draw {
            fill_direct_weights(membership.row(i), connection, i, &mut direct_weights);
            if !(direct_weights.iter().sum::<f64>() > 0.0) {
                sink.stats.exhausted_sources += 1;
                continue;
            }
        }

        let mut rounds = 0;
        while rounds < max_rounds && plan.has_room(i) {
            let deficit = plan.deficit(i);
            match &draw {
                TargetDraw::Direct => {
                    // no preprocessing: the distribution is rebuilt from the
                    // probability row on every round
                    direct_cdf.clear();
                    let mut acc = 0.0;
                    direct_cdf.extend(direct_weights.iter().map(|w| {
                        acc += w;
                        acc
                    }));
                    let total = acc;
                    for _ in 0..deficit {
                        let x = rng.random::<f64>() * total;
                        let j = direct_cdf.partition_point(|&c| c <= x).min(n - 1);
                        sink.try_add(plan, i, j);
                    }
                }
                TargetDraw::Table(tables) => {
                    picks.clear();
                    picks.extend((0..deficit).map(|_| pick_class(&class_cdf, rng)));
                    sink.stats.class_draws += u64::from(deficit);
                    for &l in &picks {
                        let j = tables[l].sample(rng);
                        sink.try_add(plan, i, j);
                    }
                }
                TargetDraw::Cdf(samplers) => {
                    picks.clear();
                    picks.extend((0..deficit).map(|_| pick_class(&class_cdf, rng)));
                    sink.stats.class_draws += u64::from(deficit);
                    for &l in &picks {
                        let j = samplers[l].lookup(rng.random::<f64>());
                        sink.try_add(plan, i, j);
                    }
                }
            }
            rounds += 1;
        }
        if plan.has_room(i) {
            sink.stats.exhausted_sources += 1;
        }
    }

    let stats = sink.stats;
    Ok((sink.into_edges(plan), stats))
}

/// Row `i` of `U U'^T` with the self entry zeroed.
fn fill_direct_weights(source_row: &[f64], connection: &Matrix, source: usize, out: &mut Vec<f64>) {
    out.clear();
    out.extend((0..connection.rows()).map(|j| {
        if j == source {
            0.0
        } else {
            source_row
                .iter()
                .zip(connection.row(j))
                .map(|(a, b)| a * b)
                .sum::<f64>()
        }
    }));
}
