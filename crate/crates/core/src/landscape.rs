//! Parameter lattices and the iterative-depth landscape scan.
//!
//! A scan walks depths `p_start, p_start + p_step, ..., <= p_target`. At each
//! recorded depth the first `p - 1` layers are fixed and the last
//! `(beta, gamma)` pair sweeps a `resolution x resolution` lattice. How the
//! fixed layers are chosen depends on the [`Strategy`]: the sequential method
//! keeps the argmin of the previous depth, while ramp and optimised schedules
//! truncate their own full-depth parameter vector and use the grid only for
//! assessment.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{IsingHamiltonian, ProblemKind};
use crate::statevector::{expectation, DiagonalEnergies, ParamPoint, PreparedPrefix};
use crate::strategies::{linear_ramp, optimize_energies, OptimizerConfig, RampSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub resolution: usize,
    pub beta_bounds: (f64, f64),
    pub gamma_bounds: (f64, f64),
}

impl GridSpec {
    pub fn new(resolution: usize, beta_bounds: (f64, f64), gamma_bounds: (f64, f64)) -> Result<Self> {
        let spec = GridSpec { resolution, beta_bounds, gamma_bounds };
        spec.validate()?;
        Ok(spec)
    }

    /// `beta in [-pi/4, pi/4]`, `gamma in [-pi/2, pi/2]`: the reduced domain
    /// for MaxCut on regular graphs.
    pub fn regular_maxcut(resolution: usize) -> Self {
        GridSpec { resolution, beta_bounds: (-FRAC_PI_4, FRAC_PI_4), gamma_bounds: (-FRAC_PI_2, FRAC_PI_2) }
    }

    /// `beta in [-pi/2, pi/2]`, `gamma in [-pi, pi]`.
    pub fn general(resolution: usize) -> Self {
        GridSpec { resolution, beta_bounds: (-FRAC_PI_2, FRAC_PI_2), gamma_bounds: (-PI, PI) }
    }

    pub fn for_kind(kind: ProblemKind, resolution: usize) -> Self {
        match kind {
            ProblemKind::Maxcut => Self::regular_maxcut(resolution),
            ProblemKind::Vertexcover | ProblemKind::Max3sat => Self::general(resolution),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::Parameter(format!(
                "grid resolution must be at least 2, got {}",
                self.resolution
            )));
        }
        for (name, (lo, hi)) in [("beta", self.beta_bounds), ("gamma", self.gamma_bounds)] {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Parameter(format!("{name} bounds ({lo}, {hi}) are not an interval")));
            }
        }
        Ok(())
    }

    pub fn beta_lattice(&self) -> Vec<f64> {
        lattice(self.beta_bounds, self.resolution)
    }

    pub fn gamma_lattice(&self) -> Vec<f64> {
        lattice(self.gamma_bounds, self.resolution)
    }
}

/// `upper - (i / n) * (upper - lower)` for `i = 0..n`: descending, upper bound
/// included, lower bound excluded.
pub fn lattice((lower, upper): (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|i| upper - (i as f64 / n as f64) * (upper - lower)).collect()
}

/// Grid of depth-`p` parameter points sharing a fixed `p - 1` layer prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    pub spec: GridSpec,
    pub p: usize,
    pub fixed_prefix: ParamPoint,
    /// Row-major over `(beta_index, gamma_index)`.
    pub points: Vec<ParamPoint>,
}

impl ParamGrid {
    pub fn point(&self, beta_index: usize, gamma_index: usize) -> &ParamPoint {
        &self.points[beta_index * self.spec.resolution + gamma_index]
    }
}

pub fn make_grid_of_params(spec: &GridSpec, p: usize, fixed: &ParamPoint) -> Result<ParamGrid> {
    spec.validate()?;
    if p == 0 || fixed.depth() != p - 1 {
        return Err(Error::Contract(format!(
            "depth-{p} grid needs a prefix of {} layers, got {}",
            p.saturating_sub(1),
            fixed.depth()
        )));
    }
    let betas = spec.beta_lattice();
    let gammas = spec.gamma_lattice();
    let points = betas.iter().flat_map(|&b| gammas.iter().map(move |&g| fixed.with_layer(g, b))).collect();
    Ok(ParamGrid { spec: *spec, p, fixed_prefix: fixed.clone(), points })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Sequential,
    Ramp(RampSpec),
    Optimized { init: ParamPoint, config: OptimizerConfig },
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Sequential => "sequential",
            Strategy::Ramp(r) if r.delta_beta < 0.0 => "ramp-",
            Strategy::Ramp(_) => "ramp+",
            Strategy::Optimized { .. } => "optimized",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub p_start: usize,
    pub p_target: usize,
    pub p_step: usize,
    pub strategy: Strategy,
    pub grid: GridSpec,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.p_start == 0 || self.p_step == 0 {
            return Err(Error::Parameter("p_start and p_step must be positive".into()));
        }
        if self.p_start > self.p_target {
            return Err(Error::Parameter(format!(
                "p_start = {} exceeds p_target = {}",
                self.p_start, self.p_target
            )));
        }
        match &self.strategy {
            Strategy::Sequential => {}
            Strategy::Ramp(r) if r.p != self.p_target => {
                return Err(Error::Parameter(format!(
                    "ramp depth {} must equal p_target {}",
                    r.p, self.p_target
                )));
            }
            Strategy::Ramp(_) => {}
            Strategy::Optimized { init, .. } if init.depth() != self.p_target => {
                return Err(Error::Parameter(format!(
                    "optimiser initial point has depth {}, expected p_target {}",
                    init.depth(),
                    self.p_target
                )));
            }
            Strategy::Optimized { .. } => {}
        }
        Ok(())
    }

    /// Depths that produce a recorded layer.
    pub fn depths(&self) -> Vec<usize> {
        (self.p_start..=self.p_target).step_by(self.p_step).collect()
    }
}

/// Parameters fixed after a layer, together with their energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChosenPoint {
    pub params: ParamPoint,
    pub beta: f64,
    pub gamma: f64,
    pub energy: f64,
    /// Lattice position, when the chosen pair lies exactly on the lattice.
    pub beta_index: Option<usize>,
    pub gamma_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeLayer {
    pub p: usize,
    pub fixed_params: ParamPoint,
    pub beta_lattice: Vec<f64>,
    pub gamma_lattice: Vec<f64>,
    /// Row-major over `(beta_index, gamma_index)`.
    pub energies: Vec<f64>,
    pub chosen: ChosenPoint,
}

impl LandscapeLayer {
    pub fn resolution(&self) -> usize {
        self.beta_lattice.len()
    }

    pub fn energy_at(&self, beta_index: usize, gamma_index: usize) -> f64 {
        self.energies[beta_index * self.resolution() + gamma_index]
    }

    pub fn min_energy(&self) -> f64 {
        self.energies.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_energy(&self) -> f64 {
        self.energies.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Lowest-energy lattice point; ties go to the lowest flat index.
    pub fn argmin(&self) -> (usize, usize) {
        let mut best = 0;
        for (k, &e) in self.energies.iter().enumerate() {
            if e < self.energies[best] {
                best = k;
            }
        }
        (best / self.resolution(), best % self.resolution())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSummary {
    pub params: ParamPoint,
    pub energy: f64,
    pub evaluations_used: u64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub layers: Vec<LandscapeLayer>,
    pub optimizer: Option<OptimizerSummary>,
    /// Grid points evaluated by this call (cached layers excluded).
    pub grid_evaluations: u64,
}

/// Hooks for streaming layers out as they finish and for resuming a scan
/// from previously stored results.
pub trait ScanObserver {
    fn cached_optimizer(&mut self) -> Option<OptimizerSummary> {
        None
    }

    fn optimizer_done(&mut self, _summary: &OptimizerSummary) -> Result<()> {
        Ok(())
    }

    fn cached_layer(&mut self, _p: usize) -> Option<LandscapeLayer> {
        None
    }

    fn layer_done(&mut self, _layer: &LandscapeLayer) -> Result<()> {
        Ok(())
    }
}

/// Observer that neither caches nor streams.
pub struct NoCache;

impl ScanObserver for NoCache {}

pub fn scan(h: &IsingHamiltonian, cfg: &ScanConfig) -> Result<ScanResult> {
    let energies = DiagonalEnergies::from_hamiltonian(h)?;
    scan_energies(&energies, cfg, &mut NoCache)
}

/// Energies of every lattice point appended to `prefix`, row-major.
///
/// Columns of equal gamma share one phase application; the result does not
/// depend on how rayon schedules the columns.
pub fn evaluate_grid(energies: &DiagonalEnergies, spec: &GridSpec, prefix: &ParamPoint) -> Result<Vec<f64>> {
    let prepared = PreparedPrefix::new(energies, prefix)?;
    let betas = spec.beta_lattice();
    let gammas = spec.gamma_lattice();
    let columns: Vec<Vec<f64>> = gammas
        .par_iter()
        .map(|&g| {
            let mut phased = prepared.with_phase(g);
            betas.iter().map(|&b| phased.energy_after_mixer(b)).collect()
        })
        .collect();
    let n = spec.resolution;
    let mut out = vec![0.0; n * n];
    for (j, col) in columns.iter().enumerate() {
        for (i, &e) in col.iter().enumerate() {
            out[i * n + j] = e;
        }
    }
    Ok(out)
}

fn layer_for(
    energies: &DiagonalEnergies,
    spec: &GridSpec,
    p: usize,
    prefix: &ParamPoint,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    debug_assert_eq!(prefix.depth(), p - 1);
    Ok((spec.beta_lattice(), spec.gamma_lattice(), evaluate_grid(energies, spec, prefix)?))
}

fn argmin_layer(
    p: usize,
    prefix: ParamPoint,
    (beta_lattice, gamma_lattice, grid): (Vec<f64>, Vec<f64>, Vec<f64>),
) -> LandscapeLayer {
    let mut layer = LandscapeLayer {
        p,
        fixed_params: prefix,
        beta_lattice,
        gamma_lattice,
        energies: grid,
        chosen: ChosenPoint {
            params: ParamPoint::empty(),
            beta: 0.0,
            gamma: 0.0,
            energy: 0.0,
            beta_index: None,
            gamma_index: None,
        },
    };
    let (i, j) = layer.argmin();
    let (beta, gamma) = (layer.beta_lattice[i], layer.gamma_lattice[j]);
    layer.chosen = ChosenPoint {
        params: layer.fixed_params.with_layer(gamma, beta),
        beta,
        gamma,
        energy: layer.energy_at(i, j),
        beta_index: Some(i),
        gamma_index: Some(j),
    };
    layer
}

/// Runs the scan described by `cfg`, consulting and feeding `observer`.
pub fn scan_energies(
    energies: &DiagonalEnergies,
    cfg: &ScanConfig,
    observer: &mut dyn ScanObserver,
) -> Result<ScanResult> {
    cfg.validate()?;
    let depths = cfg.depths();
    let n = cfg.grid.resolution as u64;

    // Full-depth parameters for the non-adaptive strategies.
    let mut optimizer = None;
    let schedule = match &cfg.strategy {
        Strategy::Sequential => None,
        Strategy::Ramp(spec) => Some(linear_ramp(spec)?),
        Strategy::Optimized { init, config } => {
            let summary = match observer.cached_optimizer() {
                Some(s) => s,
                None => {
                    let r = optimize_energies(energies, init, config)?;
                    let s = OptimizerSummary {
                        params: r.params,
                        energy: r.energy,
                        evaluations_used: r.evaluations_used,
                        converged: r.converged,
                    };
                    observer.optimizer_done(&s)?;
                    s
                }
            };
            let params = summary.params.clone();
            optimizer = Some(summary);
            Some(params)
        }
    };

    // Longest run of recorded depths already available from the cache.
    let mut layers = Vec::with_capacity(depths.len());
    for &p in &depths {
        match observer.cached_layer(p) {
            Some(layer) if layer.p == p => layers.push(layer),
            _ => break,
        }
    }

    let mut grid_evaluations = 0u64;
    match &schedule {
        None => {
            let (mut fixed, mut depth) = match layers.last() {
                Some(l) => (l.chosen.params.clone(), l.p),
                None => (ParamPoint::empty(), 0),
            };
            let last = *depths.last().expect("validated schedule is non-empty");
            let mut recorded = depths.iter().copied().skip(layers.len()).peekable();
            while depth < last {
                let p = depth + 1;
                let layer = argmin_layer(p, fixed.clone(), layer_for(energies, &cfg.grid, p, &fixed)?);
                grid_evaluations += n * n;
                fixed = layer.chosen.params.clone();
                depth = p;
                if recorded.peek() == Some(&p) {
                    recorded.next();
                    observer.layer_done(&layer)?;
                    layers.push(layer);
                }
            }
        }
        Some(full) => {
            for &p in depths.iter().skip(layers.len()) {
                let prefix = full.truncated(p - 1);
                let (beta_lattice, gamma_lattice, grid) = layer_for(energies, &cfg.grid, p, &prefix)?;
                grid_evaluations += n * n;
                let params = full.truncated(p);
                let (beta, gamma) = (params.betas()[p - 1], params.gammas()[p - 1]);
                let chosen = ChosenPoint {
                    energy: expectation(energies, &params),
                    beta_index: beta_lattice.iter().position(|&b| b == beta),
                    gamma_index: gamma_lattice.iter().position(|&g| g == gamma),
                    params,
                    beta,
                    gamma,
                };
                let layer = LandscapeLayer {
                    p,
                    fixed_params: prefix,
                    beta_lattice,
                    gamma_lattice,
                    energies: grid,
                    chosen,
                };
                observer.layer_done(&layer)?;
                layers.push(layer);
            }
        }
    }

    Ok(ScanResult { layers, optimizer, grid_evaluations })
}
