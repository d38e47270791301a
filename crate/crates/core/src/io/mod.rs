//! Dataset files, synthetic data, model persistence and decision-boundary
//! export.

pub mod boundary;
pub mod dataset_csv;
pub mod model_file;
pub mod synth;

pub use boundary::{decision_boundary_grid, write_boundary_csv, BoundaryPoint, Bounds};
pub use dataset_csv::{load_csv, read_csv, read_feature_rows, write_csv};
pub use model_file::{load_model, model_from_json, model_to_json, save_model, SCHEMA_VERSION};
pub use synth::{generate_synthetic, SyntheticKind, SyntheticSpec};
