//! Exact statevector simulation of QAOA for diagonal cost operators.
//!
//! Basis state `k` stores qubit `i` in bit `i`; bit value 0 is spin `z = +1`.
//! The circuit is `U_B(b_p) U_C(g_p) ... U_B(b_1) U_C(g_1) |+>^n` with
//! `U_C(g) = exp(-i g H_C)` and `U_B(b) = exp(-i b sum_j X_j)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{IsingHamiltonian, SpectrumBounds};
use crate::DEFAULT_QUBIT_CAP;

/// The `2^n` diagonal entries of a cost Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalEnergies {
    n_qubits: usize,
    values: Vec<f64>,
}

impl DiagonalEnergies {
    pub fn from_hamiltonian(h: &IsingHamiltonian) -> Result<Self> {
        Self::with_cap(h, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(h: &IsingHamiltonian, cap: usize) -> Result<Self> {
        Ok(DiagonalEnergies { n_qubits: h.n_qubits(), values: h.diagonal(cap)? })
    }

    pub fn from_values(n_qubits: usize, values: Vec<f64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize - 1 || values.len() != 1usize << n_qubits {
            return Err(Error::Contract(format!(
                "{} diagonal values do not describe a {n_qubits}-qubit register",
                values.len()
            )));
        }
        Ok(DiagonalEnergies { n_qubits, values })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bounds(&self) -> SpectrumBounds {
        SpectrumBounds::of(&self.values)
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.fract() == 0.0)
    }
}

/// `diagonal_energies` under the default qubit cap.
pub fn diagonal_energies(h: &IsingHamiltonian) -> Result<DiagonalEnergies> {
    DiagonalEnergies::from_hamiltonian(h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// Uniform superposition `|+>^n`.
pub fn init_plus_state(n: usize) -> Result<State> {
    State::plus_with_cap(n, DEFAULT_QUBIT_CAP)
}

impl State {
    pub fn plus_with_cap(n: usize, cap: usize) -> Result<State> {
        if n == 0 {
            return Err(Error::Parameter("state needs at least one qubit".into()));
        }
        crate::problems::ising::check_cap(n, cap)?;
        let dim = 1usize << n;
        let odd = if n % 2 == 1 { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
        let a = 2f64.powi(-((n / 2) as i32)) * odd;
        Ok(State { n_qubits: n, amps: vec![Complex64::new(a, 0.0); dim] })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<State> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Contract(format!("{dim} amplitudes is not a qubit register")));
        }
        Ok(State { n_qubits: dim.trailing_zeros() as usize, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `amp_k <- amp_k * exp(-i gamma d_k)`.
    pub fn apply_phase_in_place(&mut self, d: &DiagonalEnergies, gamma: f64) -> Result<()> {
        if d.n_qubits != self.n_qubits {
            return Err(Error::Contract(format!(
                "phase operator on {} qubits applied to a {}-qubit state",
                d.n_qubits, self.n_qubits
            )));
        }
        self.phase_unchecked(&d.values, gamma);
        Ok(())
    }

    fn phase_unchecked(&mut self, values: &[f64], gamma: f64) {
        for (amp, &e) in self.amps.iter_mut().zip(values) {
            let (s, c) = (gamma * e).sin_cos();
            *amp *= Complex64::new(c, -s);
        }
    }

    /// `exp(-i beta X)` on every qubit.
    pub fn apply_mixer_in_place(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        for q in 0..self.n_qubits {
            let stride = 1usize << q;
            for block in self.amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
                    *b = Complex64::new(c * y.re + s * x.im, c * y.im - s * x.re);
                }
            }
        }
    }

    /// `<psi| D |psi>`, summed serially in basis order.
    pub fn expectation_of(&self, d: &DiagonalEnergies) -> Result<f64> {
        if d.n_qubits != self.n_qubits {
            return Err(Error::Contract("energies and state differ in qubit count".into()));
        }
        Ok(measure(&self.amps, &d.values))
    }
}

fn measure(amps: &[Complex64], values: &[f64]) -> f64 {
    amps.iter().zip(values).map(|(a, &e)| a.norm_sqr() * e).sum()
}

pub fn apply_phase(s: &State, d: &DiagonalEnergies, gamma: f64) -> Result<State> {
    let mut out = s.clone();
    out.apply_phase_in_place(d, gamma)?;
    Ok(out)
}

pub fn apply_mixer(s: &State, beta: f64) -> State {
    let mut out = s.clone();
    out.apply_mixer_in_place(beta);
    out
}

/// QAOA angles `(gammas, betas)`, one pair per layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl ParamPoint {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::Parameter(format!("{} gammas vs {} betas", gammas.len(), betas.len())));
        }
        if gammas.is_empty() {
            return Err(Error::Parameter("QAOA depth must be at least 1".into()));
        }
        Ok(ParamPoint { gammas, betas })
    }

    /// Depth-zero point, used as the prefix of the first layer.
    pub fn empty() -> Self {
        ParamPoint { gammas: Vec::new(), betas: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// First `len` layers (`gammas[0:len], betas[0:len]`).
    pub fn truncated(&self, len: usize) -> ParamPoint {
        let len = len.min(self.depth());
        ParamPoint { gammas: self.gammas[..len].to_vec(), betas: self.betas[..len].to_vec() }
    }

    pub fn with_layer(&self, gamma: f64, beta: f64) -> ParamPoint {
        let mut next = self.clone();
        next.gammas.push(gamma);
        next.betas.push(beta);
        next
    }

    pub fn negated(&self) -> ParamPoint {
        ParamPoint {
            gammas: self.gammas.iter().map(|g| -g).collect(),
            betas: self.betas.iter().map(|b| -b).collect(),
        }
    }

    /// Flat vector `[gammas..., betas...]` used by the optimiser.
    pub fn to_flat(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub fn from_flat(x: &[f64]) -> Result<Self> {
        if !x.len().is_multiple_of(2) {
            return Err(Error::Parameter("flat parameter vector must have even length".into()));
        }
        let (g, b) = x.split_at(x.len() / 2);
        ParamPoint::new(g.to_vec(), b.to_vec())
    }
}

/// A circuit prefix simulated once and reused for many final layers.
///
/// A layer with `beta == 0` leaves probabilities untouched except through its
/// phase, which commutes with the next phase; such phases are carried forward
/// and merged into the next non-trivial layer, or dropped if none follows
/// (a trailing diagonal unitary cannot change `|amp|^2`). Appending a
/// `beta = 0` layer therefore reproduces the prefix energy bit for bit.
#[derive(Debug, Clone)]
pub struct PreparedPrefix<'a> {
    energies: &'a DiagonalEnergies,
    state: State,
    pending_gamma: f64,
}

impl<'a> PreparedPrefix<'a> {
    pub fn new(energies: &'a DiagonalEnergies, prefix: &ParamPoint) -> Result<Self> {
        Self::with_cap(energies, prefix, usize::MAX)
    }

    pub(crate) fn with_cap(energies: &'a DiagonalEnergies, prefix: &ParamPoint, cap: usize) -> Result<Self> {
        let mut me = PreparedPrefix {
            energies,
            state: State::plus_with_cap(energies.n_qubits, cap)?,
            pending_gamma: 0.0,
        };
        for (&g, &b) in prefix.gammas.iter().zip(&prefix.betas) {
            me.advance(g, b);
        }
        Ok(me)
    }

    fn advance(&mut self, gamma: f64, beta: f64) {
        self.pending_gamma += gamma;
        if beta != 0.0 {
            self.state.phase_unchecked(&self.energies.values, self.pending_gamma);
            self.state.apply_mixer_in_place(beta);
            self.pending_gamma = 0.0;
        }
    }

    /// Energy of the prefix itself.
    pub fn energy(&self) -> f64 {
        measure(&self.state.amps, &self.energies.values)
    }

    /// Energy after appending one layer `(gamma, beta)`.
    pub fn extend_energy(&self, gamma: f64, beta: f64) -> f64 {
        self.with_phase(gamma).energy_after_mixer(beta)
    }

    /// Applies the phase of an appended layer; the mixer angle is chosen later.
    pub fn with_phase(&self, gamma: f64) -> PhasedPrefix<'_> {
        PhasedPrefix { prefix: self, gamma, phased: None }
    }
}

/// A prepared prefix with the phase of one further layer applied.
pub struct PhasedPrefix<'p> {
    prefix: &'p PreparedPrefix<'p>,
    gamma: f64,
    phased: Option<State>,
}

impl PhasedPrefix<'_> {
    pub fn energy_after_mixer(&mut self, beta: f64) -> f64 {
        if beta == 0.0 {
            return self.prefix.energy();
        }
        let values = &self.prefix.energies.values;
        let phased = self.phased.get_or_insert_with(|| {
            let mut s = self.prefix.state.clone();
            s.phase_unchecked(values, self.prefix.pending_gamma + self.gamma);
            s
        });
        let mut s = phased.clone();
        s.apply_mixer_in_place(beta);
        measure(&s.amps, values)
    }
}

/// Exact `<gamma, beta| H_C |gamma, beta>`.
pub fn expectation(energies: &DiagonalEnergies, params: &ParamPoint) -> f64 {
    let p = params.depth();
    let prefix = params.truncated(p - 1);
    PreparedPrefix::new(energies, &prefix)
        .expect("diagonal energies always describe a valid register")
        .extend_energy(params.gammas[p - 1], params.betas[p - 1])
}

pub fn expectation_of_hamiltonian(h: &IsingHamiltonian, params: &ParamPoint) -> Result<f64> {
    Ok(expectation(&DiagonalEnergies::from_hamiltonian(h)?, params))
}

/// Builds the state by literally alternating phase and mixer layers.
pub fn evolve(energies: &DiagonalEnergies, params: &ParamPoint) -> State {
    let mut s = State::plus_with_cap(energies.n_qubits, usize::MAX).expect("valid register");
    for (&g, &b) in params.gammas.iter().zip(&params.betas) {
        s.phase_unchecked(&energies.values, g);
        s.apply_mixer_in_place(b);
    }
    s
}
