use std::io::Write;

use crate::classifier::ChaosCompModel;
use crate::error::{Error, Result};

/// Rectangle `[xmin, xmax] x [ymin, ymax]` in raw feature space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub x: f64,
    pub y: f64,
    pub label: usize,
}

fn axis(lo: f64, hi: f64, resolution: usize) -> Vec<f64> {
    if resolution == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (resolution - 1) as f64;
    (0..resolution)
        .map(|i| {
            if i + 1 == resolution {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

/// Classify every point of a `resolution x resolution` lattice over
/// `bounds`. Points are ordered with x in the outer loop.
pub fn decision_boundary_grid(
    model: &ChaosCompModel,
    bounds: Bounds,
    resolution: usize,
) -> Result<Vec<BoundaryPoint>> {
    let raw = model.preprocessor().raw_features();
    if raw != 2 {
        return Err(Error::FeatureMismatch {
            expected: 2,
            got: raw,
        });
    }
    if resolution == 0 {
        return Err(Error::InvalidParameter(
            "resolution must be at least 1".into(),
        ));
    }
    let xs = axis(bounds.xmin, bounds.xmax, resolution);
    let ys = axis(bounds.ymin, bounds.ymax, resolution);
    let mut out = Vec::with_capacity(resolution * resolution);
    for &x in &xs {
        for &y in &ys {
            let label = model.predict_one(&[x, y])?.label;
            out.push(BoundaryPoint { x, y, label });
        }
    }
    Ok(out)
}

/// CSV with columns `x,y,label`.
pub fn write_boundary_csv<W: Write>(points: &[BoundaryPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "label"])?;
    for p in points {
        w.write_record([p.x.to_string(), p.y.to_string(), p.label.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<boundary>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{fit, TrainConfig};
    use crate::io::synth::{generate_synthetic, SyntheticKind, SyntheticSpec};

    fn xor_model() -> ChaosCompModel {
        let ds = generate_synthetic(&SyntheticSpec {
            kind: SyntheticKind::Xor,
            ..SyntheticSpec::default()
        })
        .unwrap();
        let config = TrainConfig {
            n: 3,
            threshold: 0.3,
            ..TrainConfig::default()
        };
        fit(&ds, config).unwrap()
    }

    const UNIT: Bounds = Bounds {
        xmin: 0.0,
        xmax: 1.0,
        ymin: 0.0,
        ymax: 1.0,
    };

    #[test]
    fn xor_corners() {
        let grid = decision_boundary_grid(&xor_model(), UNIT, 2).unwrap();
        let labels: Vec<usize> = grid.iter().map(|p| p.label).collect();
        assert_eq!(labels, vec![0, 1, 1, 0]);
        assert_eq!((grid[1].x, grid[1].y), (0.0, 1.0));
    }

    #[test]
    fn single_point_at_lower_corner() {
        let b = Bounds {
            xmin: -2.0,
            xmax: 3.0,
            ymin: 0.5,
            ymax: 9.0,
        };
        let grid = decision_boundary_grid(&xor_model(), b, 1).unwrap();
        assert_eq!(grid.len(), 1);
        assert_eq!((grid[0].x, grid[0].y), (-2.0, 0.5));
    }

    #[test]
    fn lattice_size_and_csv() {
        let grid = decision_boundary_grid(&xor_model(), UNIT, 7).unwrap();
        assert_eq!(grid.len(), 49);
        let mut buf = Vec::new();
        write_boundary_csv(&grid, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 50);
        assert!(text.starts_with("x,y,label\n0,0,0\n"));
    }
}
