//! Back-iteration interval coding.
//!
//! Recovers the interval of initial conditions that reproduces a symbol or
//! word sequence under a (return) map, and turns its length into a code
//! length in bits. Classification only ever needs the length, which
//! [`code_length_log_domain`] computes without forming the interval, so it
//! cannot underflow on long sequences.

use rand::Rng;
use rand_mt::Mt;

use crate::error::{Error, Result};
use crate::symbolic::{clamp_to_domain, BakerParams, BitSequence, ReturnMapModel, WordSequence};

/// Code lengths closer than this to an integer are snapped onto it before
/// taking the ceiling, so `-log2(0.5^k)` is `k` bits and not `k + 1`.
pub const INTEGER_SNAP: f64 = 1e-9;

/// Half-open subinterval `[lower, lower + length)` of the unit interval.
///
/// The length is stored rather than the upper end, so intervals far
/// narrower than the spacing of floats near `lower` keep an accurate length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitInterval {
    lower: f64,
    length: f64,
}

impl UnitInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower >= 0.0 && upper <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "interval [{lower}, {upper}) is not inside [0, 1]"
            )));
        }
        if !(lower < upper) {
            return Err(Error::DegenerateInterval);
        }
        Ok(Self {
            lower,
            length: upper - lower,
        })
    }

    /// `[lower, lower + length)`.
    pub fn with_length(lower: f64, length: f64) -> Result<Self> {
        if !((0.0..1.0).contains(&lower) && length <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "interval at {lower} of length {length} is not inside [0, 1]"
            )));
        }
        if !(length > 0.0) {
            return Err(Error::DegenerateInterval);
        }
        Ok(Self { lower, length })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        (self.lower + self.length).min(1.0)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn midpoint(&self) -> f64 {
        self.lower + 0.5 * self.length
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x - self.lower < self.length
    }
}

/// Description length of a sequence: `-log2` of its probability under a map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeLength {
    pub exact_bits: f64,
    pub ceil_bits: u64,
}

impl CodeLength {
    pub fn from_exact(exact_bits: f64) -> Self {
        let rounded = exact_bits.round();
        let exact_bits = if (exact_bits - rounded).abs() < INTEGER_SNAP {
            rounded
        } else {
            exact_bits
        };
        // -0.0 and tiny negative noise from log2(1.0)
        let exact_bits = exact_bits.max(0.0);
        Self {
            exact_bits,
            ceil_bits: exact_bits.ceil() as u64,
        }
    }
}

/// A back-iterated interval together with its midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackIteration {
    pub interval: UnitInterval,
    pub x0: f64,
}

fn finish(lower: f64, length: f64) -> Result<BackIteration> {
    let interval = UnitInterval::with_length(clamp_to_domain(lower), length)?;
    Ok(BackIteration {
        interval,
        x0: interval.midpoint(),
    })
}

/// Interval of initial conditions whose Baker's map symbolization is `bits`.
///
/// The last symbol seeds the interval; earlier symbols are applied through
/// the inverse branches `x -> a x` and `x -> (1 - a) x + a`. The length is
/// carried as the product of branch widths.
pub fn back_iterate_binary(bits: &BitSequence, params: BakerParams) -> Result<BackIteration> {
    let symbols = bits.as_slice();
    let (&last, rest) = symbols.split_last().ok_or(Error::EmptyInstance)?;
    let a = params.a();
    let (mut lower, mut length) = if last == 0 { (0.0, a) } else { (a, 1.0 - a) };
    for &s in rest.iter().rev() {
        if s == 0 {
            lower *= a;
            length *= a;
        } else {
            lower = (1.0 - a) * lower + a;
            length *= 1.0 - a;
        }
    }
    finish(lower, length)
}

/// Interval of initial conditions whose n-th return map itinerary is `words`.
///
/// Words are consumed from last to first: the last word's partition cell is
/// the seed and every earlier word `j` maps the interval through the inverse
/// branch `x -> probs[j] x + cum[j]`.
pub fn back_iterate_words(words: &WordSequence, model: &ReturnMapModel) -> Result<BackIteration> {
    check_orders(words, model)?;
    let (&last, rest) = words.words().split_last().ok_or(Error::EmptyWords)?;
    let probs = model.probs();
    let cum = model.cumulative();
    let (mut lower, mut length) = (cum[last as usize], probs[last as usize]);
    for &w in rest.iter().rev() {
        let (p, offset) = (probs[w as usize], cum[w as usize]);
        lower = p * lower + offset;
        length *= p;
    }
    finish(lower, length)
}

fn check_orders(words: &WordSequence, model: &ReturnMapModel) -> Result<()> {
    if words.order() != model.order() {
        return Err(Error::OrderMismatch {
            model: model.order(),
            sequence: words.order(),
        });
    }
    Ok(())
}

/// `ceil(-log2 length)` for an explicit interval.
pub fn code_length(interval: &UnitInterval) -> Result<CodeLength> {
    let len = interval.length();
    if !(len > 0.0) {
        return Err(Error::DegenerateInterval);
    }
    Ok(CodeLength::from_exact(-len.log2()))
}

/// Code length of `words` under the word distribution `probs`, computed as
/// `-sum log2 probs[w]` rather than through the interval.
///
/// `probs` is indexed by word value and must have `2^n` entries. Zero entries
/// are allowed as long as no word of the sequence lands on one.
pub fn code_length_log_domain(words: &WordSequence, probs: &[f64]) -> Result<CodeLength> {
    if words.is_empty() {
        return Err(Error::EmptyWords);
    }
    let size = 1usize << words.order();
    if probs.len() != size {
        return Err(Error::LengthMismatch {
            left: size,
            right: probs.len(),
        });
    }
    let mut counts = vec![0u64; size];
    for &w in words.words() {
        counts[w as usize] += 1;
    }
    let mut bits = 0.0;
    for (word, (&count, &p)) in counts.iter().zip(probs).enumerate() {
        if count == 0 {
            continue;
        }
        if !(p > 0.0) {
            return Err(Error::ZeroProbability { word: word as u32 });
        }
        bits -= count as f64 * p.log2();
    }
    Ok(CodeLength::from_exact(bits))
}

/// Same as [`code_length_log_domain`] with the order checked against `model`.
pub fn model_code_length(words: &WordSequence, model: &ReturnMapModel) -> Result<CodeLength> {
    check_orders(words, model)?;
    code_length_log_domain(words, model.probs())
}

/// Shannon entropy of the model's word distribution in bits per word.
pub fn model_entropy(model: &ReturnMapModel) -> f64 {
    entropy_bits(model.probs())
}

/// `-sum p log2 p`, skipping zero entries.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Entropy (equivalently the Lyapunov exponent) of the Baker's map with
/// skewness `a`, in bits: `-a log2 a - (1 - a) log2 (1 - a)`.
pub fn baker_entropy(params: BakerParams) -> f64 {
    let a = params.a();
    -a * a.log2() - (1.0 - a) * (1.0 - a).log2()
}

/// Outcome of [`shannon_optimality_trial`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShannonTrialSummary {
    /// `ceil_bits / N` for every trial.
    pub rates: Vec<f64>,
    pub mean_bits_per_symbol: f64,
    pub std_dev: f64,
    /// Source entropy `H(p0)` in bits per symbol.
    pub entropy: f64,
    /// Largest `|rate - H|` over the trials.
    pub max_deviation: f64,
}

/// Codes i.i.d. binary sources with a Baker's map whose skewness matches
/// each sequence's empirical fraction of zeros and reports the achieved
/// rate in bits per symbol.
///
/// Draws with no zeros or no ones are discarded and redrawn.
pub fn shannon_optimality_trial(
    p0: f64,
    length: usize,
    trials: usize,
    seed: u32,
) -> Result<ShannonTrialSummary> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "source probability must lie in (0, 1), got {p0}"
        )));
    }
    if length < 100 || trials == 0 {
        return Err(Error::InvalidParameter(
            "need a length of at least 100 and at least one trial".into(),
        ));
    }
    let mut rng = Mt::new(seed);
    let mut rates = Vec::with_capacity(trials);
    while rates.len() < trials {
        let words: Vec<u32> = (0..length)
            .map(|_| u32::from(rng.gen::<f64>() >= p0))
            .collect();
        let zeros = words.iter().filter(|&&w| w == 0).count();
        if zeros == 0 || zeros == length {
            continue;
        }
        let a = zeros as f64 / length as f64;
        let words = WordSequence::new(1, words)?;
        let model = ReturnMapModel::from_baker(BakerParams::new(a)?);
        let len = model_code_length(&words, &model)?;
        rates.push(len.ceil_bits as f64 / length as f64);
    }
    let entropy = -p0 * p0.log2() - (1.0 - p0) * (1.0 - p0).log2();
    let count = rates.len() as f64;
    let mean = rates.iter().sum::<f64>() / count;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / count;
    let max_deviation = rates
        .iter()
        .map(|r| (r - entropy).abs())
        .fold(0.0, f64::max);
    Ok(ShannonTrialSummary {
        rates,
        mean_bits_per_symbol: mean,
        std_dev: var.sqrt(),
        entropy,
        max_deviation,
    })
}
