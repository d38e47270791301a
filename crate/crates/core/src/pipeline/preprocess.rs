//! Feature augmentation and min-max scaling.

use crate::error::{Error, Result};
use crate::pipeline::Matrix;

/// Augmentation is skipped from this many raw features upward.
pub const AUGMENT_FEATURE_LIMIT: usize = 30;

/// Appends the sum of squares of each row as an extra feature when the row
/// has fewer than [`AUGMENT_FEATURE_LIMIT`] features. Returns whether the
/// column was added.
pub fn augment_sum_squares(x: &Matrix) -> (Matrix, bool) {
    let k = x.first().map_or(0, Vec::len);
    if k == 0 || k >= AUGMENT_FEATURE_LIMIT {
        return (x.clone(), false);
    }
    let out = x.iter().map(|row| augment_row(row)).collect();
    (out, true)
}

fn augment_row(row: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(row.len() + 1);
    out.extend_from_slice(row);
    out.push(row.iter().map(|v| v * v).sum());
    out
}

/// Per-feature minimum and maximum learned from training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalerParams {
    min: Vec<f64>,
    max: Vec<f64>,
}

impl ScalerParams {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        if min.len() != max.len() {
            return Err(Error::LengthMismatch {
                left: min.len(),
                right: max.len(),
            });
        }
        if let Some((lo, hi)) = min.iter().zip(&max).find(|(lo, hi)| !(hi >= lo)) {
            return Err(Error::InvalidParameter(format!(
                "scaler max {hi} is below min {lo}"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> &[f64] {
        &self.min
    }

    pub fn max(&self) -> &[f64] {
        &self.max
    }

    pub fn n_features(&self) -> usize {
        self.min.len()
    }

    /// Scale one row into `[0, 1]`. Constant features map to 0.
    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.n_features() {
            return Err(Error::FeatureMismatch {
                expected: self.n_features(),
                got: row.len(),
            });
        }
        Ok(row
            .iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| {
                let span = hi - lo;
                if span > 0.0 {
                    ((v - lo) / span).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect())
    }
}

/// Learn per-feature ranges from `x`.
pub fn minmax_fit(x: &Matrix) -> Result<ScalerParams> {
    let first = x.first().ok_or(Error::NoDataRows)?;
    let mut min = first.clone();
    let mut max = first.clone();
    for row in &x[1..] {
        if row.len() != min.len() {
            return Err(Error::FeatureMismatch {
                expected: min.len(),
                got: row.len(),
            });
        }
        for (j, &v) in row.iter().enumerate() {
            min[j] = min[j].min(v);
            max[j] = max[j].max(v);
        }
    }
    ScalerParams::new(min, max)
}

pub fn minmax_apply(x: &Matrix, params: &ScalerParams) -> Result<Matrix> {
    x.iter().map(|row| params.transform_row(row)).collect()
}

/// Raw features to `[0, 1]`-scaled model input: optional sum-of-squares
/// augmentation followed by min-max scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessor {
    raw_features: usize,
    augment: bool,
    scaler: ScalerParams,
}

impl Preprocessor {
    pub fn new(raw_features: usize, augment: bool, scaler: ScalerParams) -> Result<Self> {
        let expected = raw_features + usize::from(augment);
        if scaler.n_features() != expected {
            return Err(Error::FeatureMismatch {
                expected,
                got: scaler.n_features(),
            });
        }
        if augment && raw_features >= AUGMENT_FEATURE_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "augmentation requires fewer than {AUGMENT_FEATURE_LIMIT} features"
            )));
        }
        Ok(Self {
            raw_features,
            augment,
            scaler,
        })
    }

    /// Fit on training rows. Augmentation is applied when `allow_augment` is
    /// set and the feature count is below the limit.
    pub fn fit(x: &Matrix, allow_augment: bool) -> Result<Self> {
        let raw_features = x.first().ok_or(Error::NoDataRows)?.len();
        let (augmented, applied) = if allow_augment {
            augment_sum_squares(x)
        } else {
            (x.clone(), false)
        };
        let scaler = minmax_fit(&augmented)?;
        Self::new(raw_features, applied, scaler)
    }

    /// Pass-through for data that is already scaled to `[0, 1]`.
    pub fn identity(features: usize) -> Self {
        Self {
            raw_features: features,
            augment: false,
            scaler: ScalerParams {
                min: vec![0.0; features],
                max: vec![1.0; features],
            },
        }
    }

    pub fn raw_features(&self) -> usize {
        self.raw_features
    }

    pub fn augment(&self) -> bool {
        self.augment
    }

    pub fn scaler(&self) -> &ScalerParams {
        &self.scaler
    }

    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.raw_features {
            return Err(Error::FeatureMismatch {
                expected: self.raw_features,
                got: row.len(),
            });
        }
        if self.augment {
            self.scaler.transform_row(&augment_row(row))
        } else {
            self.scaler.transform_row(row)
        }
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        x.iter().map(|row| self.apply_row(row)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augment_examples() {
        let (out, applied) = augment_sum_squares(&vec![vec![3.0, 4.0]]);
        assert!(applied);
        assert_eq!(out, vec![vec![3.0, 4.0, 25.0]]);

        let (out, _) = augment_sum_squares(&vec![vec![0.0, 0.0, 0.0]]);
        assert_eq!(out, vec![vec![0.0; 4]]);

        let wide = vec![vec![1.0; 35]];
        let (out, applied) = augment_sum_squares(&wide);
        assert!(!applied);
        assert_eq!(out, wide);

        let p = Preprocessor::fit(&vec![vec![0.5; 35], vec![1.0; 35]], true).unwrap();
        assert!(!p.augment());
    }

    #[test]
    fn minmax_examples() {
        let col = vec![vec![0.0, 7.0], vec![5.0, 7.0], vec![10.0, 7.0]];
        let s = minmax_fit(&col).unwrap();
        let out = minmax_apply(&col, &s).unwrap();
        assert_eq!(out, vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![1.0, 0.0]]);
        assert_eq!(s.transform_row(&[12.0, 9.0]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(s.transform_row(&[-3.0, 7.0]).unwrap(), vec![0.0, 0.0]);
        assert!(matches!(minmax_fit(&vec![]), Err(Error::NoDataRows)));
    }

    #[test]
    fn preprocessor_augments_before_scaling() {
        let x = vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ];
        let p = Preprocessor::fit(&x, true).unwrap();
        assert!(p.augment());
        let out = p.apply(&x).unwrap();
        assert_eq!(out[0], vec![0.0, 0.0, 0.0]);
        assert_eq!(out[1], vec![0.0, 1.0, 0.5]);
        assert_eq!(out[3], vec![1.0, 1.0, 1.0]);
        assert!(p.apply_row(&[1.0]).is_err());
    }
}
