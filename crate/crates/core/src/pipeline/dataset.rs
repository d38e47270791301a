use crate::error::{Error, Result};

/// Row-major feature matrix.
pub type Matrix = Vec<Vec<f64>>;

/// Labelled feature matrix. Labels are dense indices into `class_names`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Matrix,
    y: Vec<usize>,
    feature_names: Vec<String>,
    class_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        x: Matrix,
        y: Vec<usize>,
        feature_names: Vec<String>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        if feature_names.len() < 2 {
            return Err(Error::TooFewFeatures(feature_names.len()));
        }
        if class_names.len() < 2 {
            return Err(Error::TooFewClasses(class_names.len()));
        }
        if let Some(row) = x.iter().find(|r| r.len() != feature_names.len()) {
            return Err(Error::FeatureMismatch {
                expected: feature_names.len(),
                got: row.len(),
            });
        }
        if let Some(&label) = y.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::LabelOutOfRange {
                label,
                classes: class_names.len(),
            });
        }
        Ok(Self {
            x,
            y,
            feature_names,
            class_names,
        })
    }

    /// Dataset with generated names `x0, x1, ...` and classes `0, 1, ...`.
    pub fn unnamed(x: Matrix, y: Vec<usize>, classes: usize) -> Result<Self> {
        let k = x.first().map_or(0, Vec::len);
        let feature_names = (0..k).map(|j| format!("x{j}")).collect();
        let class_names = (0..classes).map(|c| c.to_string()).collect();
        Self::new(x, y, feature_names, class_names)
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Instance count per class, indexed by label.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.y {
            counts[l] += 1;
        }
        counts
    }

    /// Rows at `indices`, in that order. Names are kept.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            x: indices.iter().map(|&i| self.x[i].clone()).collect(),
            y: indices.iter().map(|&i| self.y[i]).collect(),
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
        }
    }

    /// Relabel against another class ordering, matching by name.
    pub fn with_class_order(&self, class_names: &[String]) -> Result<Self> {
        let map = self
            .class_names
            .iter()
            .map(|name| {
                class_names
                    .iter()
                    .position(|c| c == name)
                    .ok_or_else(|| Error::UnknownClass(name.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let y = self.y.iter().map(|&l| map[l]).collect();
        Self::new(
            self.x.clone(),
            y,
            self.feature_names.clone(),
            class_names.to_vec(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_single_feature() {
        let err = Dataset::unnamed(vec![vec![1.0]], vec![0], 2).unwrap_err();
        assert!(matches!(err, Error::TooFewFeatures(1)));
    }

    #[test]
    fn rejects_ragged_rows_and_bad_labels() {
        assert!(Dataset::unnamed(vec![vec![1.0, 2.0], vec![1.0]], vec![0, 1], 2).is_err());
        assert!(Dataset::unnamed(vec![vec![1.0, 2.0]], vec![2], 2).is_err());
        assert!(Dataset::unnamed(vec![vec![1.0, 2.0]], vec![0, 1], 2).is_err());
    }

    #[test]
    fn relabels_by_name() {
        let ds = Dataset::new(
            vec![vec![0.0, 0.0], vec![1.0, 1.0]],
            vec![0, 1],
            vec!["a".into(), "b".into()],
            vec!["B".into(), "A".into()],
        )
        .unwrap();
        let re = ds.with_class_order(&["A".into(), "B".into()]).unwrap();
        assert_eq!(re.y(), &[1, 0]);
        assert!(ds.with_class_order(&["A".into(), "C".into()]).is_err());
    }
}
