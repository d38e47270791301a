//! Compression-based classification with piecewise-linear chaotic maps.
//!
//! Each class is modelled by an n-th return Baker's map whose branch widths
//! are the class's smoothed n-bit word frequencies. A feature vector is
//! min-max scaled, thresholded into bits, cut into n-bit words and coded by
//! back iteration on every class map; the class that yields the shortest
//! code wins.
//!
//! Module layout:
//! - [`symbolic`]: binarization, padding, word extraction, forward maps
//! - [`coder`]: back iteration, code lengths, entropy
//! - [`classifier`]: per-class models, training and prediction
//! - [`pipeline`]: datasets, scaling, splits, grid search, metrics
//! - [`io`]: CSV, synthetic data, model files, decision-boundary export
//! - [`cli`]: the `chaoscomp` command line

pub mod classifier;
pub mod cli;
pub mod coder;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod symbolic;

pub use classifier::{
    cosine_similarity, fit, fit_class_distribution, train, ChaosCompModel, ClassDistribution,
    Prediction, TrainConfig,
};
pub use coder::{
    back_iterate_binary, back_iterate_words, baker_entropy, code_length, code_length_log_domain,
    model_code_length, model_entropy, shannon_optimality_trial, BackIteration, CodeLength,
    ShannonTrialSummary, UnitInterval,
};
pub use error::{Error, Result};
pub use symbolic::{
    baker_forward, binarize, extract_words, pad_bits, return_map_forward, symbolize_trajectory,
    word_frequencies, BakerParams, BitSequence, ReturnMapModel, WordSequence,
};
