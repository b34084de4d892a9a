//! On-disk formats: landscape / aggregate / quality-curve CSVs and the
//! JSON sidecar written next to each scan.
//!
//! Floats are written in Rust's shortest round-trip decimal form, so a value
//! read back parses to the identical `f64`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::landscape::{ChosenPoint, GridSpec, LandscapeLayer, OptimizerSummary, ScanConfig};
use crate::metrics::{residual, AggregateLayer, QualityPoint, ResidualLayer};
use crate::problems::{ProblemKind, SpectrumBounds};
use crate::statevector::ParamPoint;

pub const LANDSCAPE_HEADER: [&str; 7] =
    ["p", "beta_index", "gamma_index", "beta", "gamma", "energy", "residual"];
pub const AGGREGATE_HEADER: [&str; 8] =
    ["p", "beta_index", "gamma_index", "beta", "gamma", "mean_residual", "std_residual", "count"];
pub const QUALITY_HEADER: [&str; 5] = ["strategy", "p", "mean_residual", "std_residual", "count"];

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>()).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

pub fn landscape_csv(layers: &[LandscapeLayer], bounds: &SpectrumBounds) -> Result<Vec<u8>> {
    let mut rows = Vec::new();
    for layer in layers {
        for (i, &b) in layer.beta_lattice.iter().enumerate() {
            for (j, &g) in layer.gamma_lattice.iter().enumerate() {
                let e = layer.energy_at(i, j);
                rows.push(vec![
                    layer.p.to_string(),
                    i.to_string(),
                    j.to_string(),
                    fmt_f64(b),
                    fmt_f64(g),
                    fmt_f64(e),
                    fmt_f64(residual(e, bounds)?),
                ]);
            }
        }
    }
    Ok(csv_bytes(&LANDSCAPE_HEADER, rows))
}

pub fn write_landscape_csv(path: &Path, layers: &[LandscapeLayer], bounds: &SpectrumBounds) -> Result<()> {
    write_atomic(path, &landscape_csv(layers, bounds)?)
}

fn parse<T: std::str::FromStr>(path: &Path, line: u64, field: &str, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::format(path, format!("line {line}: bad {field} '{raw}'")))
}

/// Residual grids of a landscape CSV, one per depth in file order.
pub fn read_residual_layers(path: &Path) -> Result<Vec<ResidualLayer>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::format(path, e))?;
    let header = reader.headers().map_err(|e| Error::format(path, e))?.clone();
    if header.iter().ne(LANDSCAPE_HEADER) {
        return Err(Error::format(path, "unexpected landscape header"));
    }
    let mut layers: Vec<ResidualLayer> = Vec::new();
    for (n, rec) in reader.records().enumerate() {
        let line = n as u64 + 2;
        let rec = rec.map_err(|e| Error::format(path, e))?;
        let p: usize = parse(path, line, "p", &rec[0])?;
        let r: f64 = parse(path, line, "residual", &rec[6])?;
        match layers.last_mut() {
            Some(l) if l.p == p => l.residuals.push(r),
            _ => layers.push(ResidualLayer { p, resolution: 0, residuals: vec![r] }),
        }
    }
    for l in &mut layers {
        let res = (l.residuals.len() as f64).sqrt().round() as usize;
        if res * res != l.residuals.len() {
            return Err(Error::format(path, format!("layer p={} is not a square grid", l.p)));
        }
        l.resolution = res;
    }
    Ok(layers)
}

pub fn aggregate_csv(layers: &[AggregateLayer], grid: &GridSpec) -> Vec<u8> {
    let betas = grid.beta_lattice();
    let gammas = grid.gamma_lattice();
    let n = grid.resolution;
    let rows = layers.iter().flat_map(|l| {
        let (betas, gammas) = (&betas, &gammas);
        (0..n).flat_map(move |i| {
            (0..n).map(move |j| {
                vec![
                    l.p.to_string(),
                    i.to_string(),
                    j.to_string(),
                    fmt_f64(betas[i]),
                    fmt_f64(gammas[j]),
                    fmt_f64(l.mean[i * n + j]),
                    fmt_f64(l.std[i * n + j]),
                    l.count.to_string(),
                ]
            })
        })
    });
    csv_bytes(&AGGREGATE_HEADER, rows)
}

pub fn quality_csv(strategy: &str, points: &[QualityPoint]) -> Vec<u8> {
    csv_bytes(
        &QUALITY_HEADER,
        points.iter().map(|q| {
            vec![
                strategy.to_string(),
                q.p.to_string(),
                fmt_f64(q.mean_residual),
                fmt_f64(q.std_residual),
                q.count.to_string(),
            ]
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub p: usize,
    pub fixed_params: ParamPoint,
    pub chosen: ChosenPoint,
    pub chosen_residual: f64,
    pub min_energy: f64,
    pub max_energy: f64,
}

impl LayerRecord {
    pub fn from_layer(layer: &LandscapeLayer, bounds: &SpectrumBounds) -> Result<Self> {
        Ok(LayerRecord {
            p: layer.p,
            fixed_params: layer.fixed_params.clone(),
            chosen: layer.chosen.clone(),
            chosen_residual: residual(layer.chosen.energy, bounds)?,
            min_energy: layer.min_energy(),
            max_energy: layer.max_energy(),
        })
    }
}

/// Metadata written beside each landscape CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSidecar {
    pub tool_version: String,
    pub instance_hash: String,
    pub config_hash: String,
    pub problem: ProblemKind,
    pub n_qubits: usize,
    pub penalty: f64,
    pub config: ScanConfig,
    pub spectrum: SpectrumBounds,
    pub optimizer: Option<OptimizerSummary>,
    pub layers: Vec<LayerRecord>,
    pub grid_evaluations: u64,
    pub wall_time_seconds: f64,
}

impl ScanSidecar {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::format(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("sidecar serialises");
        write_atomic(path, text.as_bytes())
    }
}

/// Hash of a scan configuration together with the encoding penalty.
pub fn config_hash(cfg: &ScanConfig, penalty: f64) -> String {
    let text = serde_json::to_string(&(cfg, penalty)).expect("config serialises");
    sha256_hex(text.as_bytes())
}
