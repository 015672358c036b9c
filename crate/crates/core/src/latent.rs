//! Latent-factor generation: class sizes, labels, membership proportions `U`,
//! connection proportions `U'`, and attribute-class proportions `V`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::model::{ClassSizeDistribution, ClassSizeMode, Labels, Matrix};

/// Floor applied to sampled membership entries before row normalization.
pub const MEMBERSHIP_FLOOR: f64 = 1e-6;

/// Whether a class connects mostly inside (positive) or outside (negative).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyType {
    Positive,
    Negative,
}

impl TopologyType {
    /// Class `l` (0-based) is positive iff `M[l][l] >= 1/k`.
    pub fn of(class_pref_mean: &Matrix, l: usize) -> Self {
        let k = class_pref_mean.rows() as f64;
        if class_pref_mean.get(l, l) >= 1.0 / k {
            TopologyType::Positive
        } else {
            TopologyType::Negative
        }
    }

    pub fn all(class_pref_mean: &Matrix) -> Vec<Self> {
        (0..class_pref_mean.rows())
            .map(|l| Self::of(class_pref_mean, l))
            .collect()
    }
}

/// True when a power-law class-size exponent lies outside the usual [1, 2].
pub fn exponent_is_atypical(exponent: f64) -> bool {
    !(1.0..=2.0).contains(&exponent)
}

/// Class proportions for `k` classes.
///
/// Power-law sizes are deterministic: class `l` (1-based rank) gets weight
/// `l^-exponent`. Normal sizes draw `k` weights from `N(mean, dev)`, floored
/// at `1e-3 * mean`.
pub fn sample_class_sizes<R: Rng + ?Sized>(
    mode: &ClassSizeMode,
    k: usize,
    rng: &mut R,
) -> Result<ClassSizeDistribution> {
    if k == 0 {
        return Err(Error::Infeasible("class count must be positive".into()));
    }
    if k == 1 {
        return ClassSizeDistribution::new(vec![1.0]);
    }
    match mode {
        ClassSizeMode::PowerLaw { exponent } => {
            if !exponent.is_finite() {
                return Err(Error::BadExponent(*exponent));
            }
            let weights: Vec<f64> = (1..=k).map(|rank| (rank as f64).powf(-exponent)).collect();
            ClassSizeDistribution::from_weights(&weights)
        }
        ClassSizeMode::Normal { mean, dev } => {
            let floor = 1e-3 * mean.abs().max(f64::MIN_POSITIVE);
            let weights: Vec<f64> = (0..k)
                .map(|_| {
                    let z: f64 = rng.sample(StandardNormal);
                    (mean + dev * z).max(floor)
                })
                .collect();
            ClassSizeDistribution::from_weights(&weights)
        }
        ClassSizeMode::Explicit { rho } => {
            if rho.len() != k {
                return Err(Error::BadShape {
                    what: "class size distribution rho",
                    expected: format!("{k} entries"),
                    got: format!("{} entries", rho.len()),
                });
            }
            ClassSizeDistribution::new(rho.clone())
        }
    }
}

/// Draws one label per node from `rho`, then moves one node from the largest
/// class into every class left empty.
pub fn assign_labels<R: Rng + ?Sized>(
    rho: &ClassSizeDistribution,
    n: usize,
    rng: &mut R,
) -> Result<Labels> {
    let k = rho.k();
    if n < k {
        return Err(Error::Infeasible(format!(
            "{n} nodes cannot populate {k} non-empty classes"
        )));
    }
    let dist = WeightedIndex::new(rho.as_slice())
        .map_err(|e| Error::Infeasible(format!("invalid class weights: {e}")))?;
    let mut labels = Labels::from_class_indices((0..n).map(|_| dist.sample(rng)));

    let mut members = labels.members(k);
    for empty in 0..k {
        if !members[empty].is_empty() {
            continue;
        }
        let largest = (0..k)
            .max_by(|&a, &b| members[a].len().cmp(&members[b].len()).then(b.cmp(&a)))
            .expect("k >= 1");
        let node = members[largest]
            .pop()
            .expect("largest class has >= 2 nodes");
        labels.set_class_index(node, empty);
        members[empty].push(node);
    }
    Ok(labels)
}

/// Rearranges labels so that every class is spread evenly over node ids,
/// keeping each class's size. Class `l` with `c` members places its `r`-th
/// member at key `(r + u) / c`, `u` uniform in [0, 1); nodes take the labels
/// in key order.
///
/// Node ids are the edge-generation order (descending expected degree), so
/// this gives every class its share of the high-degree nodes instead of
/// leaving it to chance.
pub fn stratify_labels<R: Rng + ?Sized>(labels: &Labels, k: usize, rng: &mut R) -> Labels {
    let mut keys: Vec<(f64, usize)> = Vec::with_capacity(labels.len());
    for (l, count) in labels.class_counts(k).into_iter().enumerate() {
        for r in 0..count {
            let u: f64 = rng.random();
            keys.push(((r as f64 + u) / count as f64, l));
        }
    }
    keys.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Labels::from_class_indices(keys.into_iter().map(|(_, l)| l))
}

/// Samples `U`: row `i` is `N(M[C_i], D[C_i])` entrywise, floored at
/// [`MEMBERSHIP_FLOOR`] and normalized to sum one.
pub fn init_membership<R: Rng + ?Sized>(
    labels: &Labels,
    class_pref_mean: &Matrix,
    class_pref_dev: &Matrix,
    rng: &mut R,
) -> Result<Matrix> {
    let k = class_pref_mean.rows();
    if class_pref_mean.shape() != (k, k) || class_pref_dev.shape() != (k, k) {
        return Err(Error::BadShape {
            what: "class preference mean/deviation",
            expected: format!("{k}x{k}"),
            got: format!(
                "{:?} / {:?}",
                class_pref_mean.shape(),
                class_pref_dev.shape()
            ),
        });
    }
    let n = labels.len();
    let mut u = Matrix::zeros(n, k);
    for i in 0..n {
        let c = labels.class_index(i);
        if c >= k {
            return Err(Error::BadShape {
                what: "label vector",
                expected: format!("labels in 1..={k}"),
                got: format!("label {}", c + 1),
            });
        }
        let mean = class_pref_mean.row(c);
        let dev = class_pref_dev.row(c);
        let row = u.row_mut(i);
        for j in 0..k {
            let z: f64 = rng.sample(StandardNormal);
            row[j] = (mean[j] + dev[j] * z).max(MEMBERSHIP_FLOOR);
        }
        let sum: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= sum);
    }
    Ok(u)
}

/// Reverses a membership row around its own class `l` (0-based): the own
/// coordinate becomes `1 - u[l]`, the others are the complements `1 - u[h]`
/// rescaled so the row sums to one.
pub fn reverse_membership_row(row: &[f64], l: usize) -> Result<Vec<f64>> {
    let k = row.len();
    if k < 2 || l >= k {
        return Err(Error::DegenerateRow { label: l + 1 });
    }
    let complement: f64 = row
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != l)
        .map(|(_, &v)| 1.0 - v)
        .sum();
    if complement <= 0.0 {
        return Err(Error::DegenerateRow { label: l + 1 });
    }
    let scale = row[l] / complement;
    Ok(row
        .iter()
        .enumerate()
        .map(|(h, &v)| if h == l { 1.0 - v } else { (1.0 - v) * scale })
        .collect())
}

/// Builds `U'` from `U`: rows of positive classes are copied, rows of
/// negative classes are reversed. Apply exactly once per `U`; reversal is not
/// an involution.
pub fn derive_connection_proportions(
    membership: &Matrix,
    labels: &Labels,
    class_pref_mean: &Matrix,
) -> Result<Matrix> {
    let types = TopologyType::all(class_pref_mean);
    let mut connection = membership.clone();
    for i in 0..membership.rows() {
        let c = labels.class_index(i);
        if types[c] == TopologyType::Negative {
            let rev = reverse_membership_row(membership.row(i), c)?;
            connection.row_mut(i).copy_from_slice(&rev);
        }
    }
    Ok(connection)
}

/// `V` starts as a copy of `H`.
pub fn init_attr_proportions(attr_class_corr: &Matrix) -> Matrix {
    attr_class_corr.clone()
}
