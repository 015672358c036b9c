//! Attribute generation from the base matrix `U V^T`, plus the 1-D
//! earth-mover distance used to check attribute distributions.

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::Matrix;
use crate::rng::{stream_rng, Stream};

/// `U V^T`, an n x d matrix.
pub fn base_attributes(membership: &Matrix, attr_proportions: &Matrix) -> Result<Matrix> {
    if attr_proportions.rows() > 0 && attr_proportions.cols() != membership.cols() {
        return Err(Error::BadShape {
            what: "attribute-class proportions V",
            expected: format!("d x {}", membership.cols()),
            got: format!("{:?}", attr_proportions.shape()),
        });
    }
    let d = attr_proportions.rows();
    Ok(Matrix::from_fn(membership.rows(), d, |i, delta| {
        membership
            .row(i)
            .iter()
            .zip(attr_proportions.row(delta))
            .map(|(u, v)| u * v)
            .sum()
    }))
}

/// Normal-mode attributes and the number of columns that were constant
/// after noise (those are set to 0.5).
#[derive(Debug, Clone, PartialEq)]
pub struct NormalAttributes {
    pub values: Matrix,
    pub constant_columns: usize,
}

/// Adds `N(0, omega^2)` noise to every entry, then min-max scales each
/// column to [0, 1]. Column `delta` draws from its own seed stream.
pub fn apply_normal(base: &Matrix, omega: f64, seed: u64) -> Result<NormalAttributes> {
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::OutOfRange {
            what: "omega".into(),
            value: omega,
            range: "[0, inf)",
        });
    }
    let (n, d) = base.shape();
    let mut values = base.clone();
    let mut constant_columns = 0;
    for delta in 0..d {
        let mut rng = stream_rng(seed, Stream::Attribute(delta));
        let mut col: Vec<f64> = (0..n)
            .map(|i| {
                let z: f64 = rng.sample(StandardNormal);
                base.get(i, delta) + omega * z
            })
            .collect();
        let (lo, hi) = col
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        if hi > lo {
            col.iter_mut()
                .for_each(|v| *v = ((*v - lo) / (hi - lo)).clamp(0.0, 1.0));
        } else {
            constant_columns += 1;
            col.iter_mut().for_each(|v| *v = 0.5);
        }
        for (i, v) in col.into_iter().enumerate() {
            values.set(i, delta, v);
        }
    }
    Ok(NormalAttributes {
        values,
        constant_columns,
    })
}

/// Bernoulli-mode attributes and the number of base entries that had to be
/// clamped into [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliAttributes {
    pub values: Matrix,
    pub clamped_entries: usize,
}

/// Entry `(i, delta)` is 1 with probability `base[i][delta]`.
pub fn apply_bernoulli(base: &Matrix, seed: u64) -> BernoulliAttributes {
    let (n, d) = base.shape();
    let mut values = Matrix::zeros(n, d);
    let mut clamped_entries = 0;
    for delta in 0..d {
        let mut rng = stream_rng(seed, Stream::Attribute(delta));
        for i in 0..n {
            let raw = base.get(i, delta);
            let p = raw.clamp(0.0, 1.0);
            if p != raw {
                clamped_entries += 1;
            }
            // always consume one draw so columns stay aligned
            let x: f64 = rng.random();
            values.set(i, delta, if x < p { 1.0 } else { 0.0 });
        }
    }
    BernoulliAttributes {
        values,
        clamped_entries,
    }
}

fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Earth-mover (Wasserstein-1) distance between two 1-D empirical
/// distributions: the L1 distance between their quantile functions.
pub fn em_distance_1d(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let (a, b) = (sorted(a), sorted(b));
    if a.len() == b.len() {
        let total: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum();
        return Ok(total / a.len() as f64);
    }
    // Both quantile functions are step functions with breaks at i/na and
    // j/nb; walk the merged breakpoints.
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut pos = 0.0;
    let mut total = 0.0;
    while i < a.len() && j < b.len() {
        let next_a = (i + 1) as f64 / na;
        let next_b = (j + 1) as f64 / nb;
        let next = next_a.min(next_b);
        total += (next - pos) * (a[i] - b[j]).abs();
        pos = next;
        if next_a <= next {
            i += 1;
        }
        if next_b <= next {
            j += 1;
        }
    }
    Ok(total)
}

/// Deterministic `n`-point sample of `N(mean, sd^2)`: the quantiles at
/// `(i + 0.5) / n`.
pub fn normal_quantile_sample(n: usize, mean: f64, sd: f64) -> Vec<f64> {
    if sd <= 0.0 {
        return vec![mean; n];
    }
    let normal = Normal::new(mean, sd).expect("finite positive sd");
    (0..n)
        .map(|i| normal.inverse_cdf((i as f64 + 0.5) / n as f64))
        .collect()
}

/// EM distance of each column of `samples` to `N(mean_delta, omega^2)`, where
/// `mean_delta` is the column mean of `reference`; summed over columns.
pub fn em_distance_to_fitted_normal(
    samples: &Matrix,
    reference: &Matrix,
    omega: f64,
) -> Result<f64> {
    let mut total = 0.0;
    for delta in 0..samples.cols() {
        let col = samples.column(delta);
        let ref_col = reference.column(delta);
        if ref_col.is_empty() {
            return Err(Error::EmptySample);
        }
        let mean = ref_col.iter().sum::<f64>() / ref_col.len() as f64;
        let target = normal_quantile_sample(col.len(), mean, omega);
        total += em_distance_1d(&col, &target)?;
    }
    Ok(total)
}
