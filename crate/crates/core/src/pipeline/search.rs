//! Cross-validated grid search over binarization threshold and word length.

use std::io::Write;

use rayon::prelude::*;

use crate::classifier::{train, TrainConfig};
use crate::error::{Error, Result};
use crate::pipeline::{compute_metrics, stratified_kfold, Dataset, Matrix, Preprocessor};

/// Search space and cross-validation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperGrid {
    pub thresholds: Vec<f64>,
    pub n_values: Vec<u32>,
    pub alpha: f64,
    pub folds: usize,
}

impl Default for HyperGrid {
    /// Thresholds 0.01..=1.00 in steps of 0.01, n in 1..=4, alpha 0.01,
    /// five folds.
    fn default() -> Self {
        Self {
            thresholds: (1..=100).map(|i| f64::from(i) / 100.0).collect(),
            n_values: vec![1, 2, 3, 4],
            alpha: 0.01,
            folds: 5,
        }
    }
}

impl HyperGrid {
    pub fn validate(&self) -> Result<()> {
        if self.thresholds.is_empty() || self.n_values.is_empty() {
            return Err(Error::InvalidParameter("empty hyperparameter grid".into()));
        }
        if let Some(t) = self.thresholds.iter().find(|&&t| !(t > 0.0 && t <= 1.0)) {
            return Err(Error::InvalidParameter(format!(
                "threshold {t} is outside (0, 1]"
            )));
        }
        if self.n_values.contains(&0) {
            return Err(Error::InvalidParameter(
                "word length must be positive".into(),
            ));
        }
        if self.folds < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 folds, got {}",
                self.folds
            )));
        }
        Ok(())
    }
}

/// Validation macro-F1 of one grid cell on every fold.
#[derive(Debug, Clone, PartialEq)]
pub struct CvCell {
    pub threshold: f64,
    pub n: u32,
    pub fold_scores: Vec<f64>,
    pub mean: f64,
}

/// All grid cells in grid order: n outer, threshold inner.
#[derive(Debug, Clone, PartialEq)]
pub struct CvTable {
    pub cells: Vec<CvCell>,
}

impl CvTable {
    /// CSV with columns `threshold,n,fold,macro_f1,mean_macro_f1`, one row
    /// per cell and fold.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["threshold", "n", "fold", "macro_f1", "mean_macro_f1"])?;
        for cell in &self.cells {
            for (fold, score) in cell.fold_scores.iter().enumerate() {
                w.write_record([
                    cell.threshold.to_string(),
                    cell.n.to_string(),
                    fold.to_string(),
                    score.to_string(),
                    cell.mean.to_string(),
                ])?;
            }
        }
        w.flush().map_err(|e| Error::io("<cv table>", e))?;
        Ok(())
    }

    pub fn get(&self, threshold: f64, n: u32) -> Option<&CvCell> {
        self.cells
            .iter()
            .find(|c| c.n == n && (c.threshold - threshold).abs() < 1e-12)
    }

    pub fn best_mean(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.mean)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best_threshold: f64,
    pub best_n: u32,
    pub best_score: f64,
    pub table: CvTable,
}

impl SearchResult {
    /// `base` with the winning threshold and word length.
    pub fn best_config(&self, base: TrainConfig) -> TrainConfig {
        TrainConfig {
            n: self.best_n,
            threshold: self.best_threshold,
            ..base
        }
    }
}

struct FoldData {
    train_scaled: Matrix,
    train_y: Vec<usize>,
    validation: Dataset,
    preprocessor: Preprocessor,
}

fn score_cell(fold: &FoldData, ds: &Dataset, config: TrainConfig) -> f64 {
    let run = || -> Result<f64> {
        let model = train(
            &fold.train_scaled,
            &fold.train_y,
            ds.class_names().to_vec(),
            config,
            fold.preprocessor.clone(),
        )?;
        let pred = model.predict_labels(fold.validation.x())?;
        Ok(compute_metrics(fold.validation.y(), &pred, ds.n_classes())?.macro_f1)
    };
    run().unwrap_or(0.0)
}

/// Mean validation macro-F1 for every `(threshold, n)` cell of `grid`.
///
/// Preprocessing is refit on the training part of each fold. The best cell
/// has the highest mean; ties go to the smaller `n`, then the smaller
/// threshold. `jobs > 1` evaluates cells on a thread pool; results are
/// merged in grid order, so the output does not depend on `jobs`.
pub fn grid_search(
    ds: &Dataset,
    grid: &HyperGrid,
    base: TrainConfig,
    seed: u32,
    jobs: usize,
) -> Result<SearchResult> {
    grid.validate()?;
    let folds = stratified_kfold(ds, grid.folds, seed)?;
    let fold_data = folds
        .iter()
        .map(|f| {
            let train_part = ds.select(&f.train);
            let preprocessor = Preprocessor::fit(train_part.x(), base.augment)?;
            Ok(FoldData {
                train_scaled: preprocessor.apply(train_part.x())?,
                train_y: train_part.y().to_vec(),
                validation: ds.select(&f.validation),
                preprocessor,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut n_values = grid.n_values.clone();
    n_values.sort_unstable();
    n_values.dedup();
    let cells: Vec<(u32, f64)> = n_values
        .iter()
        .flat_map(|&n| grid.thresholds.iter().map(move |&t| (n, t)))
        .collect();

    let evaluate = |&(n, threshold): &(u32, f64)| {
        let config = TrainConfig {
            n,
            threshold,
            alpha: grid.alpha,
            ..base
        };
        let fold_scores: Vec<f64> = fold_data
            .iter()
            .map(|f| score_cell(f, ds, config))
            .collect();
        let mean = fold_scores.iter().sum::<f64>() / fold_scores.len() as f64;
        CvCell {
            threshold,
            n,
            fold_scores,
            mean,
        }
    };

    let scored: Vec<CvCell> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| cells.par_iter().map(evaluate).collect())
    } else {
        cells.iter().map(evaluate).collect()
    };

    let mut best = &scored[0];
    for cell in &scored[1..] {
        let better = cell.mean > best.mean
            || (cell.mean == best.mean && (cell.n, cell.threshold) < (best.n, best.threshold));
        if better {
            best = cell;
        }
    }
    Ok(SearchResult {
        best_threshold: best.threshold,
        best_n: best.n,
        best_score: best.mean,
        table: CvTable {
            cells: scored.clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blobs() -> Dataset {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..20 {
            let t = f64::from(i) / 20.0;
            x.push(vec![0.1 + 0.2 * t, 0.2 - 0.1 * t]);
            y.push(0);
            x.push(vec![0.8 - 0.2 * t, 0.9 - 0.1 * t]);
            y.push(1);
        }
        Dataset::unnamed(x, y, 2).unwrap()
    }

    #[test]
    fn single_cell_grid() {
        let grid = HyperGrid {
            thresholds: vec![0.5],
            n_values: vec![2],
            ..HyperGrid::default()
        };
        let r = grid_search(&two_blobs(), &grid, TrainConfig::default(), 0, 1).unwrap();
        assert_eq!((r.best_threshold, r.best_n), (0.5, 2));
        assert_eq!(r.table.cells.len(), 1);
        assert_eq!(r.table.cells[0].fold_scores.len(), 5);
    }

    #[test]
    fn equal_scores_prefer_smaller_n_then_threshold() {
        // Perfectly separable at every cell, so all means are 1.0.
        let grid = HyperGrid {
            thresholds: vec![0.6, 0.5],
            n_values: vec![3, 2],
            ..HyperGrid::default()
        };
        let r = grid_search(&two_blobs(), &grid, TrainConfig::default(), 0, 1).unwrap();
        assert!(r.table.cells.iter().all(|c| c.mean == 1.0));
        assert_eq!((r.best_threshold, r.best_n), (0.5, 2));
    }

    #[test]
    fn jobs_do_not_change_results() {
        let grid = HyperGrid {
            thresholds: (1..=20).map(|i| f64::from(i) / 20.0).collect(),
            n_values: vec![1, 2, 3],
            ..HyperGrid::default()
        };
        let a = grid_search(&two_blobs(), &grid, TrainConfig::default(), 4, 1).unwrap();
        let b = grid_search(&two_blobs(), &grid, TrainConfig::default(), 4, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_layout() {
        let grid = HyperGrid {
            thresholds: vec![0.25, 0.5],
            n_values: vec![1],
            folds: 2,
            ..HyperGrid::default()
        };
        let r = grid_search(&two_blobs(), &grid, TrainConfig::default(), 0, 1).unwrap();
        let mut buf = Vec::new();
        r.table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "threshold,n,fold,macro_f1,mean_macro_f1");
        assert_eq!(lines.len(), 1 + 2 * 2);
        assert!(lines[1].starts_with("0.25,1,0,"));
    }

    #[test]
    fn invalid_grid() {
        let grid = HyperGrid {
            thresholds: vec![1.5],
            ..HyperGrid::default()
        };
        assert!(grid_search(&two_blobs(), &grid, TrainConfig::default(), 0, 1).is_err());
    }
}
