//! Binary symbolization of feature vectors and the forward dynamics of the
//! Baker's map and its n-th return generalization.

use crate::error::{Error, Result};

/// Largest word length accepted anywhere in the crate. A model of order `n`
/// stores `2^n` probabilities.
pub const MAX_ORDER: u32 = 20;

/// Tolerance on `sum(probs) == 1` for a [`ReturnMapModel`].
pub const PROB_SUM_TOLERANCE: f64 = 1e-12;

/// Largest `f64` strictly below 1.0.
pub const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// Clamp a value into the half-open map domain `[0, 1)`.
pub fn clamp_to_domain(x: f64) -> f64 {
    x.clamp(0.0, BELOW_ONE)
}

fn check_domain(x: f64) -> Result<()> {
    if (0.0..1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(x))
    }
}

pub(crate) fn check_order(n: u32) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "word length must be in 1..={MAX_ORDER}, got {n}"
        )));
    }
    Ok(())
}

/// Skewness of the first-return Baker's map. Always strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BakerParams {
    a: f64,
}

impl BakerParams {
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a < 1.0 {
            Ok(Self { a })
        } else {
            Err(Error::InvalidParameter(format!(
                "skewness must lie in (0, 1), got {a}"
            )))
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

/// Ordered binary symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSequence(Vec<u8>);

impl BitSequence {
    /// Builds a sequence from raw symbols; anything other than 0 or 1 is
    /// rejected.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidParameter(format!("symbol {b} is not binary")));
        }
        Ok(Self(bits))
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&b| b == 0).count()
    }

    pub fn ones(&self) -> usize {
        self.len() - self.zeros()
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

impl TryFrom<Vec<u8>> for BitSequence {
    type Error = Error;

    fn try_from(bits: Vec<u8>) -> Result<Self> {
        Self::new(bits)
    }
}

/// Non-overlapping n-bit words, each stored as its big-endian integer value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordSequence {
    n: u32,
    words: Vec<u32>,
}

impl WordSequence {
    pub fn new(n: u32, words: Vec<u32>) -> Result<Self> {
        check_order(n)?;
        let limit = 1u32 << n;
        if let Some(&word) = words.iter().find(|&&w| w >= limit) {
            return Err(Error::WordOutOfRange { word, n });
        }
        Ok(Self { n, words })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Total number of source bits, `n * len`.
    pub fn bit_count(&self) -> usize {
        self.n as usize * self.words.len()
    }
}

/// Piecewise-linear map with `2^n` expanding branches. Branch `j` covers
/// `[cum[j], cum[j+1])` and has width `probs[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMapModel {
    n: u32,
    probs: Vec<f64>,
    cum: Vec<f64>,
}

impl ReturnMapModel {
    pub fn new(n: u32, probs: Vec<f64>) -> Result<Self> {
        check_order(n)?;
        let size = 1usize << n;
        if probs.len() != size {
            return Err(Error::InvalidParameter(format!(
                "order {n} needs {size} probabilities, got {}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "branch probabilities must be positive, got {p}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "branch probabilities sum to {total}, not 1"
            )));
        }
        let mut cum = Vec::with_capacity(size + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        for p in &probs[..size - 1] {
            acc += p;
            cum.push(acc);
        }
        cum.push(1.0);
        Ok(Self { n, probs, cum })
    }

    /// The first-return Baker's map with skewness `a` as an order-1 model.
    pub fn from_baker(params: BakerParams) -> Self {
        let a = params.a();
        Self {
            n: 1,
            probs: vec![a, 1.0 - a],
            cum: vec![0.0, a, 1.0],
        }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Partition boundaries, `2^n + 1` entries from 0 to 1.
    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }
}

/// Threshold a feature vector: symbol 1 iff `x[i] >= threshold`.
pub fn binarize(x: &[f64], threshold: f64) -> Result<BitSequence> {
    if x.is_empty() {
        return Err(Error::EmptyInstance);
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold must lie in (0, 1], got {threshold}"
        )));
    }
    Ok(BitSequence(
        x.iter().map(|&v| u8::from(v >= threshold)).collect(),
    ))
}

/// Extend `bits` with `pad_symbol` up to the next multiple of `n`.
pub fn pad_bits(bits: &BitSequence, n: u32, pad_symbol: u8) -> BitSequence {
    assert!(n >= 1, "word length must be positive");
    assert!(pad_symbol <= 1, "pad symbol must be binary");
    let n = n as usize;
    let mut out = bits.0.clone();
    let rem = out.len() % n;
    if rem != 0 {
        out.resize(out.len() + n - rem, pad_symbol);
    }
    BitSequence(out)
}

/// Split a padded bit sequence into big-endian n-bit words.
pub fn extract_words(bits: &BitSequence, n: u32) -> Result<WordSequence> {
    check_order(n)?;
    let width = n as usize;
    if !bits.len().is_multiple_of(width) {
        return Err(Error::UnpaddedSequence { len: bits.len(), n });
    }
    let words = bits
        .0
        .chunks_exact(width)
        .map(|chunk| chunk.iter().fold(0u32, |w, &b| (w << 1) | u32::from(b)))
        .collect();
    Ok(WordSequence { n, words })
}

/// Relative frequency of every n-bit word, indexed by word value.
pub fn word_frequencies(words: &WordSequence) -> Result<Vec<f64>> {
    if words.is_empty() {
        return Err(Error::EmptyWords);
    }
    let mut counts = vec![0usize; 1 << words.n];
    for &w in &words.words {
        counts[w as usize] += 1;
    }
    let total = words.len() as f64;
    Ok(counts.into_iter().map(|c| c as f64 / total).collect())
}

/// One step of the Baker's map.
pub fn baker_forward(x: f64, params: BakerParams) -> Result<f64> {
    check_domain(x)?;
    let a = params.a();
    let next = if x < a { x / a } else { (x - a) / (1.0 - a) };
    Ok(clamp_to_domain(next))
}

/// Forward-iterate from `x0` and emit `steps` symbols, `s_i = [x_i >= a]`.
pub fn symbolize_trajectory(x0: f64, params: BakerParams, steps: usize) -> Result<BitSequence> {
    check_domain(x0)?;
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let a = params.a();
    let mut bits = Vec::with_capacity(steps);
    let mut x = x0;
    for i in 0..steps {
        bits.push(u8::from(x >= a));
        if i + 1 < steps {
            x = baker_forward(x, params)?;
        }
    }
    Ok(BitSequence(bits))
}

/// One step of the n-th return map. Returns the stretched point together
/// with the word whose partition cell contains `x`.
pub fn return_map_forward(x: f64, model: &ReturnMapModel) -> Result<(f64, u32)> {
    check_domain(x)?;
    // first boundary strictly greater than x, minus one
    let j = model.cum.partition_point(|&c| c <= x) - 1;
    let j = j.min(model.probs.len() - 1);
    let next = (x - model.cum[j]) / model.probs[j];
    Ok((clamp_to_domain(next), j as u32))
}
