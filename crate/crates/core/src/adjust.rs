//! Proportion adjustment: a temperature grid search that sharpens or
//! flattens membership rows (per class) and attribute-class rows (per
//! attribute) so that the latent estimates match the requested class
//! preference mean and attribute-class correlation.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::latent::{reverse_membership_row, TopologyType};
use crate::model::{Labels, Matrix};

/// Number of grid points; the grid is `{0.05 * j : j = 1..=20}`.
pub const GRID_POINTS: usize = 20;

/// The temperature grid in ascending order. `T = 0` is excluded and `T = 1`
/// (identity on stochastic rows) is always present.
pub fn temperature_grid() -> impl Iterator<Item = f64> + Clone {
    (1..=GRID_POINTS).map(|j| j as f64 / GRID_POINTS as f64)
}

/// `out[j] = row[j]^(1/T) / sum_h row[h]^(1/T)`.
pub fn rescale_row(row: &[f64], temperature: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; row.len()];
    rescale_into(row, temperature, &mut out)?;
    Ok(out)
}

fn rescale_into(row: &[f64], temperature: f64, out: &mut [f64]) -> Result<()> {
    if !(temperature > 0.0) {
        return Err(Error::BadTemperature(temperature));
    }
    let max = row.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        out.copy_from_slice(row);
        return Ok(());
    }
    let exponent = 1.0 / temperature;
    let mut sum = 0.0;
    for (o, &v) in out.iter_mut().zip(row) {
        // scaling by the max keeps small entries from underflowing at T = 0.05
        *o = (v / max).powf(exponent);
        sum += *o;
    }
    out.iter_mut().for_each(|o| *o /= sum);
    Ok(())
}

/// Like [`rescale_row`] but keeps the row's total mass, so `T = 1` is the
/// identity even for rows that do not sum to one.
pub fn rescale_row_keep_mass(row: &[f64], temperature: f64) -> Result<Vec<f64>> {
    let mass: f64 = row.iter().sum();
    let mut out = rescale_row(row, temperature)?;
    if mass > 0.0 {
        out.iter_mut().for_each(|v| *v *= mass);
    }
    Ok(out)
}

/// Result of the grid search for one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassAdjustment {
    /// 1-based class label.
    pub label: usize,
    pub temperature: f64,
    /// Estimated mean loss with the rows left as they were (`T = 1`).
    pub loss_before: f64,
    /// Estimated mean loss after rescaling with the chosen temperature.
    pub loss_after: f64,
}

/// Result of the grid search for one attribute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttributeAdjustment {
    pub attribute: usize,
    pub temperature: f64,
    pub loss_before: f64,
    pub loss_after: f64,
}

fn l2_residual(target: &[f64], estimate: &[f64]) -> f64 {
    target
        .iter()
        .zip(estimate)
        .map(|(t, e)| (t - e) * (t - e))
        .sum::<f64>()
        .sqrt()
}

/// `|| M_l - mean_i(U_i * U'_i) ||` over the given members.
pub fn estimated_mean_loss(
    membership: &Matrix,
    connection: &Matrix,
    members: &[usize],
    target_row: &[f64],
) -> f64 {
    let k = target_row.len();
    let mut est = vec![0.0; k];
    for &i in members {
        for (e, (u, up)) in est
            .iter_mut()
            .zip(membership.row(i).iter().zip(connection.row(i)))
        {
            *e += u * up;
        }
    }
    let count = members.len().max(1) as f64;
    est.iter_mut().for_each(|e| *e /= count);
    l2_residual(target_row, &est)
}

/// Estimated connection proportions of `members` after rescaling with `t`.
fn estimate_at(
    membership: &Matrix,
    members: &[usize],
    class: usize,
    topo: TopologyType,
    t: f64,
) -> Result<Vec<f64>> {
    let k = membership.cols();
    let mut est = vec![0.0; k];
    let mut scaled = vec![0.0; k];
    for &i in members {
        rescale_into(membership.row(i), t, &mut scaled)?;
        match topo {
            TopologyType::Positive => {
                for (e, s) in est.iter_mut().zip(&scaled) {
                    *e += s * s;
                }
            }
            TopologyType::Negative => {
                let rev = reverse_membership_row(&scaled, class)?;
                for (e, (s, r)) in est.iter_mut().zip(scaled.iter().zip(&rev)) {
                    *e += s * r;
                }
            }
        }
    }
    let count = members.len() as f64;
    est.iter_mut().for_each(|e| *e /= count);
    Ok(est)
}

/// Grid-searches the temperature minimizing the estimated mean loss of class
/// `class`, then rewrites the class's rows of `U` and `U'` in place.
///
/// Ties go to the smaller temperature.
pub fn adjust_class(
    membership: &mut Matrix,
    connection: &mut Matrix,
    members: &[usize],
    class_pref_mean: &Matrix,
    class: usize,
    topo: TopologyType,
) -> Result<ClassAdjustment> {
    let chosen = search_class(membership, members, class_pref_mean, class, topo)?;
    apply_class(
        membership,
        connection,
        members,
        class,
        topo,
        chosen.temperature,
    )?;
    Ok(chosen)
}

fn search_class(
    membership: &Matrix,
    members: &[usize],
    class_pref_mean: &Matrix,
    class: usize,
    topo: TopologyType,
) -> Result<ClassAdjustment> {
    if members.is_empty() {
        return Err(Error::EmptyClass(class + 1));
    }
    let target = class_pref_mean.row(class);
    let mut best: Option<(f64, f64)> = None;
    let mut loss_before = f64::NAN;
    for t in temperature_grid() {
        let loss = l2_residual(target, &estimate_at(membership, members, class, topo, t)?);
        if t == 1.0 {
            loss_before = loss;
        }
        if best.is_none_or(|(_, b)| loss < b) {
            best = Some((t, loss));
        }
    }
    let (temperature, loss_after) = best.expect("grid is non-empty");
    Ok(ClassAdjustment {
        label: class + 1,
        temperature,
        loss_before,
        loss_after,
    })
}

fn apply_class(
    membership: &mut Matrix,
    connection: &mut Matrix,
    members: &[usize],
    class: usize,
    topo: TopologyType,
    temperature: f64,
) -> Result<()> {
    for &i in members {
        let scaled = rescale_row(membership.row(i), temperature)?;
        let conn = match topo {
            TopologyType::Positive => scaled.clone(),
            TopologyType::Negative => reverse_membership_row(&scaled, class)?,
        };
        membership.row_mut(i).copy_from_slice(&scaled);
        connection.row_mut(i).copy_from_slice(&conn);
    }
    Ok(())
}

/// Runs [`adjust_class`] for every class. The searches run in parallel and
/// write to disjoint rows afterwards, so the result does not depend on the
/// thread count.
pub fn adjust_membership(
    membership: &mut Matrix,
    connection: &mut Matrix,
    labels: &Labels,
    class_pref_mean: &Matrix,
) -> Result<Vec<ClassAdjustment>> {
    let k = class_pref_mean.rows();
    let members = labels.members(k);
    let types = TopologyType::all(class_pref_mean);
    let snapshot: &Matrix = membership;
    let chosen: Vec<ClassAdjustment> = (0..k)
        .into_par_iter()
        .map(|l| search_class(snapshot, &members[l], class_pref_mean, l, types[l]))
        .collect::<Result<_>>()?;
    for adj in &chosen {
        let l = adj.label - 1;
        apply_class(
            membership,
            connection,
            &members[l],
            l,
            types[l],
            adj.temperature,
        )?;
    }
    Ok(chosen)
}

/// `P[l]` is the mean membership row over class `l`.
pub fn class_mean_membership(membership: &Matrix, labels: &Labels, k: usize) -> Result<Matrix> {
    let mut p = Matrix::zeros(k, membership.cols());
    let counts = labels.class_counts(k);
    for i in 0..membership.rows() {
        let c = labels.class_index(i);
        for (dst, v) in p.row_mut(c).iter_mut().zip(membership.row(i)) {
            *dst += v;
        }
    }
    for (l, &count) in counts.iter().enumerate() {
        if count == 0 {
            return Err(Error::EmptyClass(l + 1));
        }
        p.row_mut(l).iter_mut().for_each(|v| *v /= count as f64);
    }
    Ok(p)
}

fn attribute_loss(class_mean: &Matrix, target: &[f64], v_row: &[f64]) -> f64 {
    let est: Vec<f64> = class_mean
        .iter_rows()
        .map(|p| p.iter().zip(v_row).map(|(a, b)| a * b).sum())
        .collect();
    l2_residual(target, &est)
}

/// For each attribute, grid-searches the temperature minimizing
/// `|| H_delta - P f(V_delta, T) ||` and replaces `V_delta` by the minimizer.
///
/// The rescale keeps each row's mass, so rows of `V` that do not sum to one
/// keep their scale. All-zero rows are left untouched.
pub fn adjust_attributes(
    attr_proportions: &mut Matrix,
    class_mean: &Matrix,
    attr_class_corr: &Matrix,
) -> Result<Vec<AttributeAdjustment>> {
    let d = attr_proportions.rows();
    if attr_class_corr.rows() != d
        || (d > 0
            && (attr_class_corr.cols() != attr_proportions.cols()
                || class_mean.cols() != attr_proportions.cols()
                || class_mean.rows() != attr_class_corr.cols()))
    {
        return Err(Error::BadShape {
            what: "V / P / H",
            expected: "V: d x k, P: k x k, H: d x k".into(),
            got: format!(
                "V {:?}, P {:?}, H {:?}",
                attr_proportions.shape(),
                class_mean.shape(),
                attr_class_corr.shape()
            ),
        });
    }
    let mut out = Vec::with_capacity(d);
    for delta in 0..d {
        let target = attr_class_corr.row(delta);
        let row = attr_proportions.row(delta).to_vec();
        let loss_before = attribute_loss(class_mean, target, &row);
        let mut best = (1.0, loss_before, row.clone());
        if row.iter().any(|&v| v > 0.0) {
            best.1 = f64::INFINITY;
            for t in temperature_grid() {
                let candidate = rescale_row_keep_mass(&row, t)?;
                let loss = attribute_loss(class_mean, target, &candidate);
                if loss < best.1 {
                    best = (t, loss, candidate);
                }
            }
        }
        attr_proportions.row_mut(delta).copy_from_slice(&best.2);
        out.push(AttributeAdjustment {
            attribute: delta,
            temperature: best.0,
            loss_before,
            loss_after: best.1,
        });
    }
    Ok(out)
}
