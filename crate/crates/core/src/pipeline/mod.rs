//! Dataset handling, preprocessing, splitting, cross-validated search and
//! evaluation metrics.

pub mod dataset;
pub mod metrics;
pub mod preprocess;
pub mod search;
pub mod split;

pub use dataset::{Dataset, Matrix};
pub use metrics::{compute_metrics, Metrics};
pub use preprocess::{augment_sum_squares, minmax_apply, minmax_fit, Preprocessor, ScalerParams};
pub use search::{grid_search, CvCell, CvTable, HyperGrid, SearchResult};
pub use split::{cap_per_class, numpy_permutation, stratified_kfold, train_test_split, Fold};
