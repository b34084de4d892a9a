use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_QUBIT_CAP;

/// Diagonal cost operator `sum J_ij z_i z_j + sum h_i z_i + offset`.
///
/// Couplings are stored once per unordered pair under the key `(i, j)` with
/// `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingHamiltonian {
    n_qubits: usize,
    couplings: BTreeMap<(usize, usize), f64>,
    fields: Vec<f64>,
    offset: f64,
}

impl IsingHamiltonian {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Parameter("Hamiltonian needs at least one qubit".into()));
        }
        Ok(IsingHamiltonian {
            n_qubits,
            couplings: BTreeMap::new(),
            fields: vec![0.0; n_qubits],
            offset: 0.0,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.couplings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn add_coupling(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if i == j {
            return Err(Error::Parameter(format!("coupling needs two distinct qubits, got ({i}, {i})")));
        }
        self.check_index(i.max(j))?;
        *self.couplings.entry((i.min(j), i.max(j))).or_insert(0.0) += value;
        Ok(())
    }

    pub fn add_field(&mut self, i: usize, value: f64) -> Result<()> {
        self.check_index(i)?;
        self.fields[i] += value;
        Ok(())
    }

    pub fn add_offset(&mut self, value: f64) {
        self.offset += value;
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n_qubits {
            return Err(Error::Parameter(format!("qubit {i} out of range for {} qubits", self.n_qubits)));
        }
        Ok(())
    }

    /// True when every local field vanishes, i.e. the operator commutes with a
    /// global spin flip.
    pub fn is_spin_flip_symmetric(&self) -> bool {
        self.fields.iter().all(|&h| h == 0.0)
    }

    /// Eigenvalue of computational basis state `basis`.
    pub fn energy(&self, basis: u64) -> f64 {
        let spin = |i: usize| if (basis >> i) & 1 == 0 { 1.0 } else { -1.0 };
        let mut acc = 0.0;
        for (&(i, j), &v) in &self.couplings {
            acc += v * spin(i) * spin(j);
        }
        for (i, &h) in self.fields.iter().enumerate() {
            acc += h * spin(i);
        }
        acc + self.offset
    }

    /// Every diagonal entry, indexed by basis state. Each entry is accumulated
    /// in the same order as [`IsingHamiltonian::energy`], so the two agree
    /// bit for bit.
    pub fn diagonal(&self, cap: usize) -> Result<Vec<f64>> {
        check_cap(self.n_qubits, cap)?;
        let dim = 1usize << self.n_qubits;
        let mut values = vec![0.0; dim];
        for (&(i, j), &v) in &self.couplings {
            for (k, e) in values.iter_mut().enumerate() {
                let parity = ((k >> i) ^ (k >> j)) & 1;
                *e += if parity == 0 { v } else { -v };
            }
        }
        for (i, &h) in self.fields.iter().enumerate() {
            if h == 0.0 {
                continue;
            }
            for (k, e) in values.iter_mut().enumerate() {
                *e += if (k >> i) & 1 == 0 { h } else { -h };
            }
        }
        for e in &mut values {
            *e += self.offset;
        }
        Ok(values)
    }
}

pub(crate) fn check_cap(n_qubits: usize, cap: usize) -> Result<()> {
    if n_qubits > cap {
        return Err(Error::Resource(format!("{n_qubits} qubits exceeds the configured cap of {cap}")));
    }
    if n_qubits >= usize::BITS as usize - 1 {
        return Err(Error::Resource(format!("{n_qubits} qubits cannot be indexed")));
    }
    Ok(())
}

/// Quadratic pseudo-Boolean cost over `x_i in {0, 1}`.
#[derive(Debug, Clone, Default)]
pub struct Qubo {
    n_vars: usize,
    constant: f64,
    linear: Vec<f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
}

impl Qubo {
    pub fn new(n_vars: usize) -> Self {
        Qubo { n_vars, constant: 0.0, linear: vec![0.0; n_vars], quadratic: BTreeMap::new() }
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant += c;
    }

    pub fn add_linear(&mut self, i: usize, c: f64) {
        self.linear[i] += c;
    }

    /// Adds `c * x_i * x_j`; `i == j` folds into the linear term since `x^2 = x`.
    pub fn add_quadratic(&mut self, i: usize, j: usize, c: f64) {
        if i == j {
            self.add_linear(i, c);
        } else {
            *self.quadratic.entry((i.min(j), i.max(j))).or_insert(0.0) += c;
        }
    }

    pub fn value(&self, bits: u64) -> f64 {
        let x = |i: usize| ((bits >> i) & 1) as f64;
        let mut acc = self.constant;
        for (i, &c) in self.linear.iter().enumerate() {
            acc += c * x(i);
        }
        for (&(i, j), &c) in &self.quadratic {
            acc += c * x(i) * x(j);
        }
        acc
    }

    /// Substitutes `x_i = (1 - z_i) / 2`.
    pub fn to_ising(&self) -> Result<IsingHamiltonian> {
        let mut h = IsingHamiltonian::new(self.n_vars)?;
        h.add_offset(self.constant);
        for (i, &c) in self.linear.iter().enumerate() {
            if c != 0.0 {
                h.add_offset(c / 2.0);
                h.add_field(i, -c / 2.0)?;
            }
        }
        for (&(i, j), &c) in &self.quadratic {
            if c == 0.0 {
                continue;
            }
            let q = c / 4.0;
            h.add_offset(q);
            h.add_field(i, -q)?;
            h.add_field(j, -q)?;
            h.add_coupling(i, j, q)?;
        }
        Ok(h)
    }
}

/// Minimum and maximum diagonal eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBounds {
    pub e0: f64,
    pub emax: f64,
}

impl SpectrumBounds {
    pub(crate) fn of(values: &[f64]) -> SpectrumBounds {
        let (e0, emax) =
            values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        SpectrumBounds { e0, emax }
    }
}

/// Exact spectrum bounds by enumerating all `2^n` diagonal entries.
pub fn spectrum_bounds(h: &IsingHamiltonian) -> Result<SpectrumBounds> {
    spectrum_bounds_with_cap(h, DEFAULT_QUBIT_CAP)
}

pub fn spectrum_bounds_with_cap(h: &IsingHamiltonian, cap: usize) -> Result<SpectrumBounds> {
    Ok(SpectrumBounds::of(&h.diagonal(cap)?))
}
