//! Parameter-selection strategies: linear ramps, sequential grid fixing and
//! derivative-free local optimisation.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{self, GridSpec, ScanConfig, Strategy};
use crate::problems::IsingHamiltonian;
use crate::statevector::{expectation, DiagonalEnergies, ParamPoint};

pub const DEFAULT_DELTA_GAMMA: f64 = 0.6;
pub const DEFAULT_DELTA_BETA: f64 = 0.3;

/// Where each layer samples the ramp.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampConvention {
    /// `gamma_i = dg * i / p`, `beta_i = db * (p - i + 1) / p`.
    #[default]
    Endpoint,
    /// `gamma_i = dg * (i - 1/2) / p`, `beta_i = db * (p - i + 1/2) / p`.
    HalfStep,
}

/// Linear ramp schedule. The sign of `delta_beta` selects the ramp direction
/// of the mixer angles (negative for LR-beta, positive for LR+beta).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RampSpec {
    pub delta_beta: f64,
    pub delta_gamma: f64,
    pub p: usize,
    #[serde(default)]
    pub convention: RampConvention,
}

impl RampSpec {
    pub fn new(delta_beta: f64, delta_gamma: f64, p: usize) -> Self {
        RampSpec { delta_beta, delta_gamma, p, convention: RampConvention::Endpoint }
    }

    /// LR with negative mixer slope and the default magnitudes.
    pub fn minus_beta(p: usize) -> Self {
        Self::new(-DEFAULT_DELTA_BETA, DEFAULT_DELTA_GAMMA, p)
    }

    /// LR with positive mixer slope and the default magnitudes.
    pub fn plus_beta(p: usize) -> Self {
        Self::new(DEFAULT_DELTA_BETA, DEFAULT_DELTA_GAMMA, p)
    }
}

pub fn linear_ramp(spec: &RampSpec) -> Result<ParamPoint> {
    if spec.p == 0 {
        return Err(Error::Parameter("ramp depth must be at least 1".into()));
    }
    let p = spec.p as f64;
    let shift = match spec.convention {
        RampConvention::Endpoint => 0.0,
        RampConvention::HalfStep => 0.5,
    };
    let gammas = (1..=spec.p).map(|i| spec.delta_gamma * (i as f64 - shift) / p).collect();
    let betas = (1..=spec.p).map(|i| spec.delta_beta * ((spec.p - i + 1) as f64 - shift) / p).collect();
    ParamPoint::new(gammas, betas)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_evaluations: usize,
    /// Initial trust-region radius, in radians.
    pub initial_step: f64,
    pub tolerance: f64,
}

impl OptimizerConfig {
    pub fn for_depth(p: usize) -> Self {
        OptimizerConfig { max_evaluations: 1000 * p.max(1), initial_step: 0.1, tolerance: 1e-6 }
    }

    fn validate(&self, p: usize) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Parameter(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if !(self.initial_step > 0.0) || !self.initial_step.is_finite() {
            return Err(Error::Parameter(format!(
                "initial step must be positive, got {}",
                self.initial_step
            )));
        }
        if self.max_evaluations < 2 * p + 1 {
            return Err(Error::Parameter(format!(
                "{} evaluations cannot span a {}-dimensional simplex",
                self.max_evaluations,
                2 * p
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthRecord {
    pub p: usize,
    pub params: ParamPoint,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyResult {
    pub params: ParamPoint,
    pub energy: f64,
    pub evaluations_used: u64,
    /// False when the optimiser stopped on its evaluation budget.
    pub converged: bool,
    pub per_depth_best: Vec<DepthRecord>,
}

/// Sequential grid fixing from depth 1 to `p_target`.
///
/// At every depth the newest `(beta, gamma)` pair is scanned over `grid`
/// with all earlier pairs held fixed, and the lowest-energy point is kept
/// (lowest flat index on ties). Depths are reported every `p_step` layers.
pub fn run_sequential(
    h: &IsingHamiltonian,
    grid: &GridSpec,
    p_target: usize,
    p_step: usize,
) -> Result<StrategyResult> {
    let energies = DiagonalEnergies::from_hamiltonian(h)?;
    run_sequential_energies(&energies, grid, p_target, p_step)
}

pub fn run_sequential_energies(
    energies: &DiagonalEnergies,
    grid: &GridSpec,
    p_target: usize,
    p_step: usize,
) -> Result<StrategyResult> {
    let cfg = ScanConfig { p_start: 1, p_target, p_step, strategy: Strategy::Sequential, grid: *grid };
    let result = landscape::scan_energies(energies, &cfg, &mut landscape::NoCache)?;
    let per_depth_best: Vec<DepthRecord> = result
        .layers
        .iter()
        .map(|l| DepthRecord { p: l.p, params: l.chosen.params.clone(), energy: l.chosen.energy })
        .collect();
    let last = per_depth_best.last().expect("a valid schedule has at least one layer");
    Ok(StrategyResult {
        params: last.params.clone(),
        energy: last.energy,
        evaluations_used: result.grid_evaluations,
        converged: true,
        per_depth_best,
    })
}

/// COBYLA over all `2p` angles starting from `init`.
///
/// The returned point is the best one evaluated, so its energy never exceeds
/// the initial energy. Running out of budget is reported through
/// `converged = false`.
pub fn optimize(h: &IsingHamiltonian, init: &ParamPoint, cfg: &OptimizerConfig) -> Result<StrategyResult> {
    let energies = DiagonalEnergies::from_hamiltonian(h)?;
    optimize_energies(&energies, init, cfg)
}

struct Tracker {
    evaluations: u64,
    best: Option<(Vec<f64>, f64)>,
}

pub fn optimize_energies(
    energies: &DiagonalEnergies,
    init: &ParamPoint,
    cfg: &OptimizerConfig,
) -> Result<StrategyResult> {
    let p = init.depth();
    if p == 0 {
        return Err(Error::Parameter("initial point must have depth >= 1".into()));
    }
    cfg.validate(p)?;

    let tracker = RefCell::new(Tracker { evaluations: 0, best: None });
    let objective = |x: &[f64], _: &mut ()| -> f64 {
        let point = ParamPoint::from_flat(x).expect("optimiser keeps the dimension");
        let e = expectation(energies, &point);
        let mut t = tracker.borrow_mut();
        t.evaluations += 1;
        if t.best.as_ref().is_none_or(|(_, b)| e < *b) {
            t.best = Some((x.to_vec(), e));
        }
        e
    };

    let x0 = init.to_flat();
    let bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); x0.len()];
    let no_constraints: Vec<&dyn cobyla::Func<()>> = Vec::new();
    let stop = cobyla::StopTols {
        ftol_abs: cfg.tolerance,
        xtol_abs: vec![cfg.tolerance; x0.len()],
        ..cobyla::StopTols::default()
    };
    let outcome = cobyla::minimize(
        objective,
        &x0,
        &bounds,
        &no_constraints,
        (),
        cfg.max_evaluations,
        cobyla::RhoBeg::All(cfg.initial_step),
        Some(stop),
    );
    let converged = match outcome {
        Ok((cobyla::SuccessStatus::MaxEvalReached, _, _)) => false,
        Ok(_) => true,
        // Round-off limited termination still leaves a valid best point.
        Err((cobyla::FailStatus::RoundoffLimited, _, _)) => true,
        Err((status, _, _)) => {
            return Err(Error::Contract(format!("COBYLA failed: {status:?}")));
        }
    };

    let Tracker { evaluations, best } = tracker.into_inner();
    let (x, energy) = best.ok_or_else(|| Error::Contract("optimiser made no evaluations".into()))?;
    let params = ParamPoint::from_flat(&x)?;
    Ok(StrategyResult {
        per_depth_best: vec![DepthRecord { p, params: params.clone(), energy }],
        params,
        energy,
        evaluations_used: evaluations,
        converged,
    })
}
