//! Seeded two-dimensional toy datasets and logic-gate truth tables.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use rand_mt::Mt;

use crate::error::{Error, Result};
use crate::pipeline::{numpy_permutation, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// Two concentric noisy rings, inner radius 0.8 of the outer.
    Circles,
    /// Two interleaved half circles.
    Moons,
    /// Two Gaussian blobs on either side of the line `x + y = 0`.
    Linear,
    Xor,
    Nand,
    Nor,
}

impl SyntheticKind {
    pub fn is_gate(self) -> bool {
        matches!(self, Self::Xor | Self::Nand | Self::Nor)
    }
}

impl FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "circles" => Ok(Self::Circles),
            "moons" => Ok(Self::Moons),
            "linear" => Ok(Self::Linear),
            "xor" => Ok(Self::Xor),
            "nand" => Ok(Self::Nand),
            "nor" => Ok(Self::Nor),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    /// Total sample count, split evenly between the two classes. Ignored by
    /// the gate datasets, which always have four rows.
    pub samples: usize,
    /// Standard deviation of the Gaussian noise added to each coordinate.
    pub noise: f64,
    pub seed: u32,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            kind: SyntheticKind::Circles,
            samples: 500,
            noise: 0.1,
            seed: 0,
        }
    }
}

const CIRCLE_FACTOR: f64 = 0.8;
const BLOB_CENTER: f64 = 1.0;
const BLOB_SPREAD: f64 = 0.5;

fn gate(kind: SyntheticKind) -> Vec<usize> {
    let inputs = [(0, 0), (0, 1), (1, 0), (1, 1)];
    inputs
        .iter()
        .map(|&(a, b)| match kind {
            SyntheticKind::Xor => a ^ b,
            SyntheticKind::Nand => 1 - (a & b),
            SyntheticKind::Nor => 1 - (a | b),
            _ => unreachable!("not a gate"),
        })
        .collect()
}

fn linspace(start: f64, stop: f64, count: usize, endpoint: bool) -> impl Iterator<Item = f64> {
    let steps = if endpoint {
        count.saturating_sub(1)
    } else {
        count
    };
    let step = if steps == 0 {
        0.0
    } else {
        (stop - start) / steps as f64
    };
    (0..count).map(move |i| start + step * i as f64)
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    if spec.kind.is_gate() {
        let x = vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ];
        return Dataset::unnamed(x, gate(spec.kind), 2);
    }
    if spec.samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples, got {}",
            spec.samples
        )));
    }
    if !(spec.noise >= 0.0 && spec.noise.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise must be non-negative, got {}",
            spec.noise
        )));
    }
    let n_first = spec.samples / 2;
    let n_second = spec.samples - n_first;
    let mut rng = Mt::new(spec.seed);
    let mut points: Vec<(Vec<f64>, usize)> = Vec::with_capacity(spec.samples);

    match spec.kind {
        SyntheticKind::Circles => {
            for t in linspace(0.0, 2.0 * PI, n_first, false) {
                points.push((vec![t.cos(), t.sin()], 0));
            }
            for t in linspace(0.0, 2.0 * PI, n_second, false) {
                points.push((vec![CIRCLE_FACTOR * t.cos(), CIRCLE_FACTOR * t.sin()], 1));
            }
        }
        SyntheticKind::Moons => {
            for t in linspace(0.0, PI, n_first, true) {
                points.push((vec![t.cos(), t.sin()], 0));
            }
            for t in linspace(0.0, PI, n_second, true) {
                points.push((vec![1.0 - t.cos(), 0.5 - t.sin()], 1));
            }
        }
        SyntheticKind::Linear => {
            for (label, count) in [(0usize, n_first), (1, n_second)] {
                let sign = if label == 0 { -1.0 } else { 1.0 };
                let mut made = 0;
                while made < count {
                    let p: Vec<f64> = (0..2)
                        .map(|_| {
                            sign * BLOB_CENTER + BLOB_SPREAD * rng.sample::<f64, _>(StandardNormal)
                        })
                        .collect();
                    // keep each blob strictly on its side of x + y = 0
                    if sign * (p[0] + p[1]) > 0.0 {
                        points.push((p, label));
                        made += 1;
                    }
                }
            }
        }
        _ => unreachable!("gates handled above"),
    }

    let order = numpy_permutation(points.len(), rng.gen());
    let mut x = Vec::with_capacity(points.len());
    let mut y = Vec::with_capacity(points.len());
    for i in order {
        let (mut p, label) = points[i].clone();
        if spec.kind != SyntheticKind::Linear {
            for v in &mut p {
                *v += spec.noise * rng.sample::<f64, _>(StandardNormal);
            }
        }
        x.push(p);
        y.push(label);
    }
    Dataset::unnamed(x, y, 2)
}
