//! Exact QAOA experimentation toolkit.
//!
//! The crate covers the full pipeline used to study QAOA parameter
//! landscapes on small instances:
//!
//! * [`problems`]: seeded instance generation (3-regular graphs, random
//!   3-CNF formulas) and their diagonal Ising encodings.
//! * [`statevector`]: exact simulation of the alternating phase/mixer
//!   circuit on `|+>^n` for diagonal cost Hamiltonians.
//! * [`strategies`]: linear-ramp schedules, sequential grid fixing and
//!   COBYLA local optimisation.
//! * [`landscape`]: the parameter lattice and the iterative-depth scan.
//! * [`metrics`]: residual energy and cross-instance aggregation.
//! * [`io`]: CSV / JSON formats shared with the command-line driver.

// `!(a < b)` is used on purpose so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod landscape;
pub mod metrics;
pub mod problems;
pub mod statevector;
pub mod strategies;

pub use error::{Error, Result};
pub use landscape::{
    make_grid_of_params, scan, GridSpec, LandscapeLayer, ParamGrid, ScanConfig, ScanResult, Strategy,
};
pub use metrics::{aggregate, quality_curve, residual, AggregateLayer, ResidualLayer};
pub use problems::{
    gen_3cnf, gen_regular_graph, max3sat_to_ising, maxcut_to_ising, spectrum_bounds, vertexcover_to_ising,
    Cnf3Formula, Graph, IsingHamiltonian, SpectrumBounds,
};
pub use statevector::{expectation, DiagonalEnergies, ParamPoint, State};
pub use strategies::{linear_ramp, optimize, run_sequential, OptimizerConfig, RampSpec, StrategyResult};

/// Largest register simulated unless a caller raises it explicitly.
pub const DEFAULT_QUBIT_CAP: usize = 24;
