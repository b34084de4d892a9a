//! Residual energy and cross-instance statistics.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::LandscapeLayer;
use crate::problems::SpectrumBounds;

/// Slack allowed outside `[e0, emax]` before an energy is considered invalid.
pub const RESIDUAL_SLACK: f64 = 1e-9;

/// `(f - e0) / (emax - e0)`, clamped to `[0, 1]`.
pub fn residual(f: f64, bounds: &SpectrumBounds) -> Result<f64> {
    let SpectrumBounds { e0, emax } = *bounds;
    if !(e0 < emax) {
        return Err(Error::Parameter(format!(
            "residual energy is undefined for a degenerate spectrum (e0 = emax = {e0})"
        )));
    }
    if !(f >= e0 - RESIDUAL_SLACK && f <= emax + RESIDUAL_SLACK) {
        return Err(Error::Contract(format!("energy {f} lies outside the spectrum [{e0}, {emax}]")));
    }
    Ok(((f - e0) / (emax - e0)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualLayer {
    pub p: usize,
    pub resolution: usize,
    /// Row-major over `(beta_index, gamma_index)`.
    pub residuals: Vec<f64>,
}

impl ResidualLayer {
    pub fn from_layer(layer: &LandscapeLayer, bounds: &SpectrumBounds) -> Result<Self> {
        Ok(ResidualLayer {
            p: layer.p,
            resolution: layer.resolution(),
            residuals: layer.energies.iter().map(|&e| residual(e, bounds)).collect::<Result<_>>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateLayer {
    pub p: usize,
    pub resolution: usize,
    pub mean: Vec<f64>,
    /// Population standard deviation.
    pub std: Vec<f64>,
    pub count: usize,
}

/// Arithmetic mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Elementwise mean and standard deviation over instances at one depth.
pub fn aggregate(layers: &[ResidualLayer]) -> Result<AggregateLayer> {
    let first = layers.first().ok_or_else(|| Error::Parameter("cannot aggregate zero layers".into()))?;
    for l in layers {
        if l.p != first.p || l.resolution != first.resolution || l.residuals.len() != first.residuals.len() {
            return Err(Error::Contract(format!(
                "layer (p = {}, resolution = {}) does not match (p = {}, resolution = {})",
                l.p, l.resolution, first.p, first.resolution
            )));
        }
    }
    let cells = first.residuals.len();
    let mut column = vec![0.0; layers.len()];
    let mut mean = Vec::with_capacity(cells);
    let mut std = Vec::with_capacity(cells);
    for k in 0..cells {
        for (slot, l) in column.iter_mut().zip(layers) {
            *slot = l.residuals[k];
        }
        let (m, s) = mean_std(&column);
        mean.push(m);
        std.push(s);
    }
    Ok(AggregateLayer { p: first.p, resolution: first.resolution, mean, std, count: layers.len() })
}

/// Residual of the parameters a strategy fixed at each depth, for one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceCurve {
    pub instance: String,
    pub points: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityPoint {
    pub p: usize,
    pub mean_residual: f64,
    pub std_residual: f64,
    pub count: usize,
}

/// Per-depth mean and standard deviation of the chosen-parameter residuals.
/// Every instance must report every depth seen in any instance.
pub fn quality_curve(curves: &[InstanceCurve]) -> Result<Vec<QualityPoint>> {
    if curves.is_empty() {
        return Err(Error::Parameter("quality curve needs at least one instance".into()));
    }
    let depths: BTreeSet<usize> = curves.iter().flat_map(|c| c.points.iter().map(|&(p, _)| p)).collect();
    let mut missing = Vec::new();
    for c in curves {
        for &p in &depths {
            if !c.points.iter().any(|&(q, _)| q == p) {
                missing.push(format!("({}, p={p})", c.instance));
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::Contract(format!("missing layers: {}", missing.join(", "))));
    }
    Ok(depths
        .into_iter()
        .map(|p| {
            let values: Vec<f64> = curves
                .iter()
                .map(|c| c.points.iter().find(|&&(q, _)| q == p).expect("checked above").1)
                .collect();
            let (mean, std) = mean_std(&values);
            QualityPoint { p, mean_residual: mean, std_residual: std, count: values.len() }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: SpectrumBounds = SpectrumBounds { e0: -3.0, emax: 1.0 };

    #[test]
    fn residual_examples() {
        assert_eq!(residual(-3.0, &B).unwrap(), 0.0);
        assert_eq!(residual(1.0, &B).unwrap(), 1.0);
        assert_eq!(residual(-1.0, &B).unwrap(), 0.5);
        assert_eq!(residual(1.0 + 1e-12, &B).unwrap(), 1.0);
        assert_eq!(residual(-3.0 - 1e-12, &B).unwrap(), 0.0);
    }

    #[test]
    fn residual_errors() {
        let flat = SpectrumBounds { e0: 2.0, emax: 2.0 };
        assert!(matches!(residual(2.0, &flat), Err(Error::Parameter(_))));
        assert!(matches!(residual(1.1, &B), Err(Error::Contract(_))));
        assert!(matches!(residual(f64::NAN, &B), Err(Error::Contract(_))));
    }

    fn layer(p: usize, r: Vec<f64>) -> ResidualLayer {
        ResidualLayer { p, resolution: 2, residuals: r }
    }

    #[test]
    fn aggregate_examples() {
        let a = layer(1, vec![0.1, 0.2, 0.3, 0.4]);
        let single = aggregate(std::slice::from_ref(&a)).unwrap();
        assert_eq!(single.mean, a.residuals);
        assert!(single.std.iter().all(|&s| s == 0.0));

        let b = layer(1, vec![0.3, 0.2, 0.0, 1.0]);
        let two = aggregate(&[a.clone(), b]).unwrap();
        let expect_mean = [0.2, 0.2, 0.15, 0.7];
        let expect_std = [0.1, 0.0, 0.15, 0.3];
        for k in 0..4 {
            assert!((two.mean[k] - expect_mean[k]).abs() < 1e-15);
            assert!((two.std[k] - expect_std[k]).abs() < 1e-15);
        }
        assert_eq!(two.count, 2);

        assert!(aggregate(&[]).is_err());
        assert!(matches!(aggregate(&[a.clone(), layer(2, vec![0.0; 4])]), Err(Error::Contract(_))));
        let wide = ResidualLayer { p: 1, resolution: 3, residuals: vec![0.0; 9] };
        assert!(matches!(aggregate(&[a, wide]), Err(Error::Contract(_))));
    }

    #[test]
    fn quality_curve_examples() {
        let one = InstanceCurve { instance: "a".into(), points: vec![(1, 0.4), (2, 0.3)] };
        let q = quality_curve(std::slice::from_ref(&one)).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q.iter().all(|pt| pt.std_residual == 0.0 && pt.count == 1));

        let two = InstanceCurve { instance: "b".into(), points: vec![(1, 0.2)] };
        let err = quality_curve(&[one, two]).unwrap_err().to_string();
        assert!(err.contains("(b, p=2)"), "{err}");
    }
}
