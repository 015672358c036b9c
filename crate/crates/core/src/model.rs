//! Value types shared by every stage of the generator.
//!
//! Class labels are 1-based (`1..=k`) wherever they cross an API or file
//! boundary; node ids are 0-based. Internally, class indices are 0-based and
//! the conversion happens in [`Labels::class_index`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used for every "sums to one" check.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

/// Dense row-major matrix of `f64`. Serialized as nested arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0.0)
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from rows. Ragged input is rejected.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::BadShape {
                    what: "matrix row",
                    expected: format!("{cols} columns"),
                    got: format!("{} columns in row {i}", row.len()),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact panics on a zero chunk size
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter_rows().map(<[f64]>::to_vec).collect()
    }

    /// Largest absolute entrywise difference; `INFINITY` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Mean of squared entrywise differences over all entries.
    pub fn mse(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "mse on mismatched shapes");
        if self.data.is_empty() {
            return 0.0;
        }
        let sum: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        sum / self.data.len() as f64
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

/// Per-node class labels, stored 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Labels(Vec<u32>);

impl Labels {
    /// Wraps 1-based labels, checking each is in `1..=k`.
    pub fn new(values: Vec<u32>, k: usize) -> Result<Self> {
        if let Some((node, &bad)) = values
            .iter()
            .enumerate()
            .find(|(_, &l)| l == 0 || l as usize > k)
        {
            return Err(Error::OutOfRange {
                what: format!("label of node {node}"),
                value: f64::from(bad),
                range: "1..=k",
            });
        }
        Ok(Labels(values))
    }

    /// Builds labels from 0-based class indices.
    pub fn from_class_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Labels(indices.into_iter().map(|c| c as u32 + 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based label of node `i`.
    pub fn label(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// 0-based class index of node `i`.
    pub fn class_index(&self, i: usize) -> usize {
        self.0[i] as usize - 1
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn class_counts(&self, k: usize) -> Vec<usize> {
        let mut counts = vec![0; k];
        for &l in &self.0 {
            counts[l as usize - 1] += 1;
        }
        counts
    }

    /// Node ids of each class, indexed 0-based.
    pub fn members(&self, k: usize) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); k];
        for (i, &l) in self.0.iter().enumerate() {
            members[l as usize - 1].push(i);
        }
        members
    }

    pub(crate) fn set_class_index(&mut self, i: usize, class: usize) {
        self.0[i] = class as u32 + 1;
    }
}

/// Target class proportions `rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ClassSizeDistribution(Vec<f64>);

impl ClassSizeDistribution {
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::BadShape {
                what: "class size distribution",
                expected: "at least one class".into(),
                got: "0 entries".into(),
            });
        }
        for (l, &p) in rho.iter().enumerate() {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::OutOfRange {
                    what: format!("rho[{l}]"),
                    value: p,
                    range: "(0, 1]",
                });
            }
        }
        let sum: f64 = rho.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::NonStochasticRow {
                matrix: "rho",
                row: 0,
                sum,
            });
        }
        Ok(ClassSizeDistribution(rho))
    }

    /// Normalizes positive weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Infeasible(
                "class size weights must have a positive finite sum".into(),
            ));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for ClassSizeDistribution {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        ClassSizeDistribution::new(v)
    }
}

impl From<ClassSizeDistribution> for Vec<f64> {
    fn from(c: ClassSizeDistribution) -> Self {
        c.0
    }
}

/// Distribution applied to the base attribute matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttrDist {
    #[default]
    Normal,
    Bernoulli,
}

/// How class proportions are produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ClassSizeMode {
    /// Sizes proportional to `rank^-exponent`.
    PowerLaw { exponent: f64 },
    /// `k` relative sizes drawn from a normal law, clipped positive.
    Normal { mean: f64, dev: f64 },
    /// User supplied proportions.
    Explicit { rho: Vec<f64> },
}

impl Default for ClassSizeMode {
    fn default() -> Self {
        ClassSizeMode::PowerLaw { exponent: 1.0 }
    }
}

/// Where the expected degree sequence comes from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DegreeSpec {
    /// Power-law sequence whose exponent is fitted to the edge budget.
    #[default]
    PowerLaw,
    /// Arbitrary per-node expected degrees (any order).
    Explicit { degrees: Vec<u32> },
}

/// Strategy for the target-node draw during edge generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSelection {
    /// Quantized inverse-CDF lookup table, O(1) per draw.
    #[default]
    Table,
    /// Exact inverse CDF by binary search, O(log n) per draw, O(kn) memory.
    BinarySearch,
    /// Baseline: per-source edge weights from the full `U U'^T` row.
    /// O(nk) per source node; only useful for comparisons.
    Direct,
}

/// How labels are laid out over node ids (which are also the edge
/// generation order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelPlacement {
    /// Each class spread evenly over the order, sizes as drawn.
    #[default]
    Stratified,
    /// Every node's label drawn independently.
    Independent,
}

/// Every input of the generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub k: usize,
    /// Class preference mean, k x k.
    pub class_pref_mean: Matrix,
    /// Class preference deviation, k x k.
    pub class_pref_dev: Matrix,
    /// Attribute-class correlation, d x k.
    pub attr_class_corr: Matrix,
    pub omega: f64,
    /// Cap on edge-generation rounds per source node.
    pub max_rounds: usize,
    pub attr_dist: AttrDist,
    pub class_sizes: ClassSizeMode,
    pub degrees: DegreeSpec,
    pub target_selection: TargetSelection,
    pub label_placement: LabelPlacement,
    /// Run the proportion-adjustment phase.
    pub adjust: bool,
    pub seed: u64,
}

impl GeneratorConfig {
    /// Config with the given sizes and class preference matrices; everything
    /// else takes its default (`d = 0`, `r = 50`, power-law class sizes with
    /// exponent 1, power-law degrees).
    pub fn new(n: usize, m: usize, class_pref_mean: Matrix, class_pref_dev: Matrix) -> Self {
        let k = class_pref_mean.rows();
        GeneratorConfig {
            n,
            m,
            d: 0,
            k,
            class_pref_mean,
            class_pref_dev,
            attr_class_corr: Matrix::zeros(0, k),
            omega: 0.0,
            max_rounds: 50,
            attr_dist: AttrDist::Normal,
            class_sizes: ClassSizeMode::default(),
            degrees: DegreeSpec::PowerLaw,
            target_selection: TargetSelection::Table,
            label_placement: LabelPlacement::Stratified,
            adjust: true,
            seed: 0,
        }
    }

    pub fn with_attributes(mut self, attr_class_corr: Matrix, omega: f64, dist: AttrDist) -> Self {
        self.d = attr_class_corr.rows();
        self.attr_class_corr = attr_class_corr;
        self.omega = omega;
        self.attr_dist = dist;
        self
    }

    pub fn with_class_sizes(mut self, mode: ClassSizeMode) -> Self {
        self.class_sizes = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Checks every config invariant; the error names the first violation.
    pub fn validate(&self) -> Result<()> {
        validate_config(self)
    }
}

fn check_shape(what: &'static str, m: &Matrix, rows: usize, cols: usize) -> Result<()> {
    // A matrix with no rows carries no column information.
    let ok = m.rows() == rows && (rows == 0 || m.cols() == cols);
    if ok {
        Ok(())
    } else {
        Err(Error::BadShape {
            what,
            expected: format!("{rows}x{cols}"),
            got: format!("{}x{}", m.rows(), m.cols()),
        })
    }
}

fn check_entries(
    name: &str,
    m: &Matrix,
    range: &'static str,
    ok: impl Fn(f64) -> bool,
) -> Result<()> {
    for i in 0..m.rows() {
        for (j, &v) in m.row(i).iter().enumerate() {
            if !ok(v) {
                return Err(Error::OutOfRange {
                    what: format!("{name}[{i}][{j}]"),
                    value: v,
                    range,
                });
            }
        }
    }
    Ok(())
}

/// Checks that every row sums to one within [`ROW_SUM_TOLERANCE`].
pub fn check_stochastic_rows(matrix: &'static str, m: &Matrix) -> Result<()> {
    for (row, r) in m.iter_rows().enumerate() {
        let sum: f64 = r.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::NonStochasticRow { matrix, row, sum });
        }
    }
    Ok(())
}

pub fn validate_config(cfg: &GeneratorConfig) -> Result<()> {
    let positive = |what: &str, v: usize| {
        if v == 0 {
            Err(Error::OutOfRange {
                what: what.to_string(),
                value: 0.0,
                range: ">= 1",
            })
        } else {
            Ok(())
        }
    };
    positive("n", cfg.n)?;
    positive("m", cfg.m)?;
    positive("k", cfg.k)?;
    positive("r", cfg.max_rounds)?;
    if cfg.k > cfg.n {
        return Err(Error::OutOfRange {
            what: "k".into(),
            value: cfg.k as f64,
            range: "<= n",
        });
    }

    let (n, k, d) = (cfg.n, cfg.k, cfg.d);
    check_shape("class preference mean M", &cfg.class_pref_mean, k, k)?;
    check_shape("class preference deviation D", &cfg.class_pref_dev, k, k)?;
    check_shape("attribute-class correlation H", &cfg.attr_class_corr, d, k)?;
    if let ClassSizeMode::Explicit { rho } = &cfg.class_sizes {
        if rho.len() != k {
            return Err(Error::BadShape {
                what: "class size distribution rho",
                expected: format!("{k} entries"),
                got: format!("{} entries", rho.len()),
            });
        }
    }
    if let DegreeSpec::Explicit { degrees } = &cfg.degrees {
        if degrees.len() != n {
            return Err(Error::BadShape {
                what: "explicit degree list",
                expected: format!("{n} entries"),
                got: format!("{} entries", degrees.len()),
            });
        }
    }

    let unit = |v: f64| (0.0..=1.0).contains(&v);
    check_entries("M", &cfg.class_pref_mean, "[0, 1]", unit)?;
    check_entries("D", &cfg.class_pref_dev, "[0, inf)", |v| {
        v >= 0.0 && v.is_finite()
    })?;
    check_entries("H", &cfg.attr_class_corr, "[0, 1]", unit)?;
    if !(cfg.omega >= 0.0 && cfg.omega.is_finite()) {
        return Err(Error::OutOfRange {
            what: "omega".into(),
            value: cfg.omega,
            range: "[0, inf)",
        });
    }
    check_stochastic_rows("M", &cfg.class_pref_mean)?;

    match &cfg.class_sizes {
        ClassSizeMode::Explicit { rho } => {
            ClassSizeDistribution::new(rho.clone())?;
        }
        ClassSizeMode::PowerLaw { exponent } => {
            if !exponent.is_finite() {
                return Err(Error::BadExponent(*exponent));
            }
        }
        ClassSizeMode::Normal { mean, dev } => {
            if !(mean.is_finite() && *mean > 0.0 && dev.is_finite() && *dev >= 0.0) {
                return Err(Error::OutOfRange {
                    what: "normal class size parameters".into(),
                    value: *mean,
                    range: "mean > 0, dev >= 0",
                });
            }
        }
    }

    let max_edges = n * (n - 1) / 2;
    if cfg.m > max_edges {
        return Err(Error::InfeasibleBudget {
            n,
            m: cfg.m,
            max: max_edges,
        });
    }
    Ok(())
}

/// Compressed sparse row adjacency of an undirected graph.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Adjacency {
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(i, j) in edges {
            degree[i as usize] += 1;
            degree[j as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(i, j) in edges {
            neighbors[fill[i as usize]] = j;
            fill[i as usize] += 1;
            neighbors[fill[j as usize]] = i;
            fill[j as usize] += 1;
        }
        Adjacency { offsets, neighbors }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }
}

/// Undirected simple graph with node attributes and class labels.
///
/// Edges are stored once as `(i, j)` with `i < j`, sorted; symmetry is
/// implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    n: usize,
    k: usize,
    edges: Vec<(u32, u32)>,
    attributes: Matrix,
    labels: Labels,
}

impl AttributedGraph {
    /// Builds a graph, normalizing each pair to `i < j` and sorting. Rejects
    /// self-loops, duplicate edges, out-of-range ids, and shape mismatches.
    pub fn new(
        n: usize,
        k: usize,
        mut edges: Vec<(u32, u32)>,
        attributes: Matrix,
        labels: Labels,
    ) -> Result<Self> {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        let graph = AttributedGraph {
            n,
            k,
            edges,
            attributes,
            labels,
        };
        graph.validate()?;
        Ok(graph)
    }

    /// Scans the whole graph and reports the first broken invariant.
    pub fn validate(&self) -> Result<()> {
        if self.labels.len() != self.n {
            return Err(Error::BadShape {
                what: "label vector",
                expected: format!("{} entries", self.n),
                got: format!("{} entries", self.labels.len()),
            });
        }
        if self.attributes.rows() != self.n && self.attributes.cols() > 0 {
            return Err(Error::BadShape {
                what: "attribute matrix",
                expected: format!("{} rows", self.n),
                got: format!("{} rows", self.attributes.rows()),
            });
        }
        for (node, &l) in self.labels.as_slice().iter().enumerate() {
            if l == 0 || l as usize > self.k {
                return Err(Error::InvalidGraph(format!(
                    "node {node} has label {l}, outside 1..={}",
                    self.k
                )));
            }
        }
        for (idx, &(i, j)) in self.edges.iter().enumerate() {
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop on node {i}")));
            }
            if i > j {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) not normalized"
                )));
            }
            if j as usize >= self.n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) references a node >= n = {}",
                    self.n
                )));
            }
            if idx > 0 {
                let prev = self.edges[idx - 1];
                if prev == (i, j) {
                    return Err(Error::InvalidGraph(format!("duplicate edge ({i}, {j})")));
                }
                if prev > (i, j) {
                    return Err(Error::InvalidGraph("edge list is not sorted".into()));
                }
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn class_count(&self) -> usize {
        self.k
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.cols()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn attributes(&self) -> &Matrix {
        &self.attributes
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_edges(self.n, &self.edges)
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for &(i, j) in &self.edges {
            deg[i as usize] += 1;
            deg[j as usize] += 1;
        }
        deg
    }
}

/// Expected degrees `theta` and running actual degrees `theta_prime`.
///
/// Node `i` is the `i`-th node processed; `expected` is non-increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreePlan {
    expected: Vec<u32>,
    actual: Vec<u32>,
}

impl DegreePlan {
    /// Plan from expected degrees, sorted descending; actual degrees start at 0.
    pub fn new(mut expected: Vec<u32>) -> Self {
        expected.sort_unstable_by(|a, b| b.cmp(a));
        let actual = vec![0; expected.len()];
        DegreePlan { expected, actual }
    }

    pub fn len(&self) -> usize {
        self.expected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expected.is_empty()
    }

    pub fn expected(&self) -> &[u32] {
        &self.expected
    }

    pub fn actual(&self) -> &[u32] {
        &self.actual
    }

    pub fn expected_sum(&self) -> u64 {
        self.expected.iter().map(|&d| u64::from(d)).sum()
    }

    pub fn deficit(&self, i: usize) -> u32 {
        self.expected[i] - self.actual[i]
    }

    pub fn has_room(&self, i: usize) -> bool {
        self.actual[i] < self.expected[i]
    }

    /// Records an edge `(i, j)`. Callers must check [`has_room`] first.
    ///
    /// [`has_room`]: DegreePlan::has_room
    pub fn record_edge(&mut self, i: usize, j: usize) {
        debug_assert!(self.has_room(i) && self.has_room(j));
        self.actual[i] += 1;
        self.actual[j] += 1;
    }

    pub fn reset_actual(&mut self) {
        self.actual.iter_mut().for_each(|a| *a = 0);
    }
}

/// The three latent matrices: membership `U` (n x k), connection `U'`
/// (n x k), and attribute-class proportions `V` (d x k).
#[derive(Debug, Clone, PartialEq)]
pub struct LatentFactors {
    pub membership: Matrix,
    pub connection: Matrix,
    pub attr_proportions: Matrix,
}

impl LatentFactors {
    /// Entries of `U` and `U'` in [0, 1] and every row stochastic.
    pub fn check_invariants(&self) -> Result<()> {
        for (name, m) in [("U", &self.membership), ("U'", &self.connection)] {
            check_entries(name, m, "[0, 1]", |v| (0.0..=1.0 + 1e-12).contains(&v))?;
        }
        check_stochastic_rows("U", &self.membership)?;
        check_stochastic_rows("U'", &self.connection)?;
        check_entries("V", &self.attr_proportions, "[0, 1]", |v| {
            (0.0..=1.0 + 1e-12).contains(&v)
        })
    }
}

/// Class features measured on a concrete graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassFeatureReport {
    /// Class preference mean; rows of all-isolated classes are NaN.
    pub mean: Matrix,
    /// Class preference deviation; same NaN convention.
    pub deviation: Matrix,
    /// Realized class proportions `|Omega_l| / n`.
    pub class_sizes: Vec<f64>,
    /// Attribute-class correlation (d x k) when the graph has attributes.
    pub attr_class_corr: Option<Matrix>,
    /// Degree-0 nodes per class, excluded from mean/deviation.
    pub isolated_per_class: Vec<usize>,
    /// 1-based labels of classes whose rows are undefined.
    pub undefined_rows: Vec<usize>,
}
