//! Parameter presets: LFR-like and DC-SBM-like simulation, and a builder
//! for `M` with a chosen diagonal.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{check_stochastic_rows, Matrix, ROW_SUM_TOLERANCE};
use crate::rng::{stream_rng, Stream};

/// Class preference mean and deviation pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub class_pref_mean: Matrix,
    pub class_pref_dev: Matrix,
}

/// Default range for the random diagonal of `D` in [`diagonal_preset`].
pub const DEFAULT_DEVIATION_RANGE: (f64, f64) = (0.05, 0.3);
/// Off-diagonal entries of `D` in [`diagonal_preset`].
pub const OFF_DIAGONAL_DEVIATION: f64 = 0.05;

fn check_unit(what: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: what.to_string(),
            value: v,
            range: "[0, 1]",
        })
    }
}

fn uniform_off_diagonal(diag: &[f64]) -> Matrix {
    let k = diag.len();
    Matrix::from_fn(k, k, |l, h| {
        if l == h {
            diag[l]
        } else {
            (1.0 - diag[l]) / (k - 1) as f64
        }
    })
}

/// Every diagonal entry of `M` is `mu`, off-diagonals `(1 - mu) / (k - 1)`,
/// and `D` is zero. Note that `mu` here is the intra-class fraction.
pub fn lfr_preset(k: usize, mu: f64) -> Result<Preset> {
    if k < 2 {
        return Err(Error::OutOfRange {
            what: "k".into(),
            value: k as f64,
            range: ">= 2",
        });
    }
    check_unit("mu", mu)?;
    Ok(Preset {
        class_pref_mean: uniform_off_diagonal(&vec![mu; k]),
        class_pref_dev: Matrix::zeros(k, k),
    })
}

/// True if `(M, D)` has the LFR shape for mixing value `mu`: `D` is zero,
/// the diagonal of `M` is `mu`, and each row's off-diagonals are equal.
pub fn satisfies_lfr_conditions(preset: &Preset, mu: f64) -> bool {
    let (m, d) = (&preset.class_pref_mean, &preset.class_pref_dev);
    let k = m.rows();
    if m.shape() != (k, k) || d.shape() != (k, k) {
        return false;
    }
    let eps = ROW_SUM_TOLERANCE;
    d.as_slice().iter().all(|&v| v == 0.0)
        && (0..k).all(|l| {
            let row = m.row(l);
            let off: Vec<f64> = (0..k).filter(|&h| h != l).map(|h| row[h]).collect();
            (row[l] - mu).abs() <= eps && off.windows(2).all(|w| (w[0] - w[1]).abs() <= eps)
        })
}

/// `M` passed through unchanged with zero `D`: every node of a class gets
/// the same membership row.
pub fn dcsbm_preset(class_pref_mean: &Matrix) -> Result<Preset> {
    let k = class_pref_mean.rows();
    if class_pref_mean.cols() != k {
        return Err(Error::BadShape {
            what: "class preference mean M",
            expected: format!("{k}x{k}"),
            got: format!("{}x{}", k, class_pref_mean.cols()),
        });
    }
    check_stochastic_rows("M", class_pref_mean)?;
    Ok(Preset {
        class_pref_mean: class_pref_mean.clone(),
        class_pref_dev: Matrix::zeros(k, k),
    })
}

/// `M` with the given diagonal and each row's remaining mass spread evenly;
/// `D` has uniform random diagonal entries in `dev_range` (drawn from the
/// preset stream of `seed`) and [`OFF_DIAGONAL_DEVIATION`] elsewhere.
pub fn diagonal_preset(diag: &[f64], dev_range: (f64, f64), seed: u64) -> Result<Preset> {
    let k = diag.len();
    if k < 2 {
        return Err(Error::OutOfRange {
            what: "k".into(),
            value: k as f64,
            range: ">= 2",
        });
    }
    for (l, &v) in diag.iter().enumerate() {
        check_unit(&format!("diag[{l}]"), v)?;
    }
    let (lo, hi) = dev_range;
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
        return Err(Error::OutOfRange {
            what: "deviation range lower bound".into(),
            value: lo,
            range: "0 <= lo <= hi",
        });
    }
    let mut rng = stream_rng(seed, Stream::Presets);
    let dev_diag: Vec<f64> = (0..k)
        .map(|_| {
            if lo == hi {
                lo
            } else {
                rng.random_range(lo..hi)
            }
        })
        .collect();
    Ok(Preset {
        class_pref_mean: uniform_off_diagonal(diag),
        class_pref_dev: Matrix::from_fn(k, k, |l, h| {
            if l == h {
                dev_diag[l]
            } else {
                OFF_DIAGONAL_DEVIATION
            }
        }),
    })
}
