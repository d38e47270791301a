//! Per-class n-th return map models and minimum-code-length classification.
//!
//! Training turns every instance into a stream of n-bit words, averages the
//! per-instance word frequencies of each class and Laplace-smooths them:
//!
//! ```text
//! p_w = (sum_i p_{i,w} + alpha) / (N + 2^n * alpha)
//! ```
//!
//! A test instance is assigned to the class whose map codes its words in the
//! fewest whole bits. Ties on the bit count go to the class whose
//! distribution has the highest cosine similarity with the instance's own
//! smoothed word distribution, then to the lowest class index.

use crate::coder::{model_code_length, CodeLength};
use crate::error::{Error, Result};
use crate::pipeline::{Dataset, Matrix, Preprocessor};
use crate::symbolic::{
    binarize, check_order, extract_words, pad_bits, word_frequencies, BitSequence, ReturnMapModel,
    WordSequence,
};

/// Hyperparameters shared by training and prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// Word length.
    pub n: u32,
    /// Binarization threshold in `(0, 1]`.
    pub threshold: f64,
    /// Laplace smoothing constant.
    pub alpha: f64,
    pub pad_symbol: u8,
    /// Allow the sum-of-squares feature (only used below 30 raw features).
    pub augment: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            n: 4,
            threshold: 0.5,
            alpha: 0.01,
            pad_symbol: 1,
            augment: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        check_order(self.n)?;
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold must lie in (0, 1], got {}",
                self.threshold
            )));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "smoothing constant must be positive, got {}",
                self.alpha
            )));
        }
        if self.pad_symbol > 1 {
            return Err(Error::InvalidParameter(format!(
                "pad symbol must be 0 or 1, got {}",
                self.pad_symbol
            )));
        }
        Ok(())
    }
}

/// Smoothed word distribution of one class, held as its return map.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDistribution {
    class_id: usize,
    map: ReturnMapModel,
}

impl ClassDistribution {
    pub fn new(class_id: usize, map: ReturnMapModel) -> Self {
        Self { class_id, map }
    }

    pub fn class_id(&self) -> usize {
        self.class_id
    }

    pub fn probs(&self) -> &[f64] {
        self.map.probs()
    }

    pub fn map(&self) -> &ReturnMapModel {
        &self.map
    }
}

fn words_of(bits: &BitSequence, n: u32, pad_symbol: u8) -> Result<WordSequence> {
    if bits.is_empty() {
        return Err(Error::EmptyInstance);
    }
    extract_words(&pad_bits(bits, n, pad_symbol), n)
}

/// `(freq + alpha) / (1 + 2^n alpha)`: the smoothing formula for one
/// instance.
fn smoothed_frequencies(words: &WordSequence, alpha: f64) -> Result<Vec<f64>> {
    let size = (1u64 << words.order()) as f64;
    let denom = 1.0 + size * alpha;
    Ok(word_frequencies(words)?
        .into_iter()
        .map(|f| (f + alpha) / denom)
        .collect())
}

/// Fit the smoothed word distribution of one class from its instances.
pub fn fit_class_distribution(
    class_id: usize,
    instances: &[BitSequence],
    n: u32,
    alpha: f64,
    pad_symbol: u8,
) -> Result<ClassDistribution> {
    check_order(n)?;
    if instances.is_empty() {
        return Err(Error::EmptyClass(class_id));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "smoothing constant must be positive, got {alpha}"
        )));
    }
    let mut sum = vec![0.0; 1 << n];
    for bits in instances {
        let freqs = word_frequencies(&words_of(bits, n, pad_symbol)?)?;
        for (s, f) in sum.iter_mut().zip(freqs) {
            *s += f;
        }
    }
    let denom = instances.len() as f64 + sum.len() as f64 * alpha;
    let probs = sum.into_iter().map(|s| (s + alpha) / denom).collect();
    Ok(ClassDistribution::new(
        class_id,
        ReturnMapModel::new(n, probs)?,
    ))
}

/// A trained classifier: preprocessing plus one return map per class.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosCompModel {
    config: TrainConfig,
    preprocessor: Preprocessor,
    class_names: Vec<String>,
    classes: Vec<ClassDistribution>,
}

/// Outcome of classifying one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: usize,
    pub per_class_bits: Vec<u64>,
    pub per_class_exact_bits: Vec<f64>,
    pub tie_broken: bool,
    /// Cosine similarity with every class, filled in only when a tie had to
    /// be broken.
    pub similarity: Option<Vec<f64>>,
}

impl ChaosCompModel {
    /// Assemble a model from its parts, checking that they fit together.
    pub fn from_parts(
        config: TrainConfig,
        preprocessor: Preprocessor,
        class_names: Vec<String>,
        classes: Vec<ClassDistribution>,
    ) -> Result<Self> {
        config.validate()?;
        if classes.is_empty() {
            return Err(Error::InvalidParameter("model has no classes".into()));
        }
        if class_names.len() != classes.len() {
            return Err(Error::LengthMismatch {
                left: class_names.len(),
                right: classes.len(),
            });
        }
        for (i, c) in classes.iter().enumerate() {
            if c.class_id != i {
                return Err(Error::InvalidParameter(format!(
                    "class {i} carries id {}",
                    c.class_id
                )));
            }
            if c.map.order() != config.n {
                return Err(Error::OrderMismatch {
                    model: config.n,
                    sequence: c.map.order(),
                });
            }
        }
        Ok(Self {
            config,
            preprocessor,
            class_names,
            classes,
        })
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn preprocessor(&self) -> &Preprocessor {
        &self.preprocessor
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn classes(&self) -> &[ClassDistribution] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    /// Trainable parameter count, `m * 2^n`.
    pub fn parameter_count(&self) -> usize {
        self.classes.len() << self.config.n
    }

    /// Raw feature vector to the word sequence the class maps code.
    pub fn symbolize(&self, x: &[f64]) -> Result<WordSequence> {
        let scaled = self.preprocessor.apply_row(x)?;
        self.symbolize_scaled(&scaled)
    }

    fn symbolize_scaled(&self, scaled: &[f64]) -> Result<WordSequence> {
        let bits = binarize(scaled, self.config.threshold)?;
        words_of(&bits, self.config.n, self.config.pad_symbol)
    }

    /// Code length of `x` under every class map.
    pub fn code_lengths(&self, x: &[f64]) -> Result<Vec<CodeLength>> {
        let words = self.symbolize(x)?;
        self.classes
            .iter()
            .map(|c| model_code_length(&words, &c.map))
            .collect()
    }

    pub fn predict_one(&self, x: &[f64]) -> Result<Prediction> {
        let words = self.symbolize(x)?;
        let lengths = self
            .classes
            .iter()
            .map(|c| model_code_length(&words, &c.map))
            .collect::<Result<Vec<_>>>()?;
        let per_class_bits: Vec<u64> = lengths.iter().map(|l| l.ceil_bits).collect();
        let per_class_exact_bits = lengths.iter().map(|l| l.exact_bits).collect();
        let best = *per_class_bits.iter().min().expect("model has classes");
        let tied: Vec<usize> = (0..per_class_bits.len())
            .filter(|&c| per_class_bits[c] == best)
            .collect();

        if tied.len() == 1 {
            return Ok(Prediction {
                label: tied[0],
                per_class_bits,
                per_class_exact_bits,
                tie_broken: false,
                similarity: None,
            });
        }

        let own = smoothed_frequencies(&words, self.config.alpha)?;
        let similarity = self
            .classes
            .iter()
            .map(|c| cosine_similarity(&own, c.probs()))
            .collect::<Result<Vec<_>>>()?;
        let mut label = tied[0];
        for &c in &tied[1..] {
            if similarity[c] > similarity[label] {
                label = c;
            }
        }
        Ok(Prediction {
            label,
            per_class_bits,
            per_class_exact_bits,
            tie_broken: true,
            similarity: Some(similarity),
        })
    }

    pub fn predict_batch(&self, x: &Matrix) -> Result<Vec<Prediction>> {
        x.iter().map(|row| self.predict_one(row)).collect()
    }

    /// Predicted labels only.
    pub fn predict_labels(&self, x: &Matrix) -> Result<Vec<usize>> {
        x.iter()
            .map(|row| self.predict_one(row).map(|p| p.label))
            .collect()
    }
}

/// Train on preprocessed rows (values in `[0, 1]`).
///
/// `y` holds labels in `0..class_names.len()`; every class needs at least
/// one row. The stored `augment` flag follows `preprocessor`.
pub fn train(
    x: &Matrix,
    y: &[usize],
    class_names: Vec<String>,
    config: TrainConfig,
    preprocessor: Preprocessor,
) -> Result<ChaosCompModel> {
    config.validate()?;
    let config = TrainConfig {
        augment: preprocessor.augment(),
        ..config
    };
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let m = class_names.len();
    let mut per_class: Vec<Vec<BitSequence>> = vec![Vec::new(); m];
    for (row, &label) in x.iter().zip(y) {
        if label >= m {
            return Err(Error::LabelOutOfRange { label, classes: m });
        }
        per_class[label].push(binarize(row, config.threshold)?);
    }
    let classes = per_class
        .iter()
        .enumerate()
        .map(|(c, instances)| {
            fit_class_distribution(c, instances, config.n, config.alpha, config.pad_symbol)
        })
        .collect::<Result<Vec<_>>>()?;
    ChaosCompModel::from_parts(config, preprocessor, class_names, classes)
}

/// Fit preprocessing on `ds` and train on the result.
pub fn fit(ds: &Dataset, config: TrainConfig) -> Result<ChaosCompModel> {
    let preprocessor = Preprocessor::fit(ds.x(), config.augment)?;
    let scaled = preprocessor.apply(ds.x())?;
    train(
        &scaled,
        ds.y(),
        ds.class_names().to_vec(),
        config,
        preprocessor,
    )
}

/// `<u, v> / (|u| |v|)`.
pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|b| b * b).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}
