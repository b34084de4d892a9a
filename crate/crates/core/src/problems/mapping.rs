use super::cnf::{Cnf3Formula, Literal};
use super::graph::Graph;
use super::ising::{IsingHamiltonian, Qubo};
use crate::error::{Error, Result};

pub const DEFAULT_VERTEXCOVER_PENALTY: f64 = 2.0;
pub const DEFAULT_MAX3SAT_PENALTY: f64 = 2.0;

/// MaxCut as minimisation: each edge contributes `(z_i z_j - 1) / 2`, so the
/// eigenvalue of a partition is minus its cut size.
pub fn maxcut_to_ising(g: &Graph) -> Result<IsingHamiltonian> {
    let mut h = IsingHamiltonian::new(g.n_vertices())?;
    for &(i, j) in g.edges() {
        h.add_coupling(i, j, 0.5)?;
    }
    h.add_offset(-(g.edges().len() as f64) / 2.0);
    Ok(h)
}

/// Minimum vertex cover as the QUBO
/// `sum_i x_i + penalty * sum_{(i,j) in E} (1 - x_i)(1 - x_j)`,
/// where `x_i = 1` puts vertex `i` in the cover (spin `z_i = -1`).
pub fn vertexcover_to_ising(g: &Graph, penalty: f64) -> Result<IsingHamiltonian> {
    if !(penalty > 1.0) || !penalty.is_finite() {
        return Err(Error::Parameter(format!("vertex cover penalty must exceed 1, got {penalty}")));
    }
    let mut q = Qubo::new(g.n_vertices());
    for v in 0..g.n_vertices() {
        q.add_linear(v, 1.0);
    }
    for &(i, j) in g.edges() {
        q.add_constant(penalty);
        q.add_linear(i, -penalty);
        q.add_linear(j, -penalty);
        q.add_quadratic(i, j, penalty);
    }
    q.to_ising()
}

/// Affine form `constant + slope * x_var` of a single binary variable.
#[derive(Clone, Copy)]
struct Affine {
    var: usize,
    constant: f64,
    slope: f64,
}

impl From<Literal> for Affine {
    fn from(l: Literal) -> Self {
        if l.negated {
            Affine { var: l.var, constant: 1.0, slope: -1.0 }
        } else {
            Affine { var: l.var, constant: 0.0, slope: 1.0 }
        }
    }
}

impl Affine {
    fn plain(var: usize) -> Self {
        Affine { var, constant: 0.0, slope: 1.0 }
    }
}

fn add_affine(q: &mut Qubo, coef: f64, a: Affine) {
    q.add_constant(coef * a.constant);
    q.add_linear(a.var, coef * a.slope);
}

/// `coef * a * b` for affine forms over distinct variables.
fn add_product(q: &mut Qubo, coef: f64, a: Affine, b: Affine) {
    q.add_constant(coef * a.constant * b.constant);
    q.add_linear(b.var, coef * a.constant * b.slope);
    q.add_linear(a.var, coef * a.slope * b.constant);
    q.add_quadratic(a.var, b.var, coef * a.slope * b.slope);
}

/// Max3SAT on `n_vars + m` qubits: variables first, then one ancilla per clause.
///
/// For a clause with literal values `a, b, c` the unsatisfied indicator
/// `(1-a)(1-b)(1-c) = 1 - a - b - c + ab + ac + bc - abc` is quadratised by
/// replacing `ab` in the cubic term with ancilla `w` and adding
/// `penalty * (ab - 2aw - 2bw + 3w)`, which vanishes iff `w = ab` and is at
/// least `penalty` otherwise. The minimum energy is `m - MaxSat(f)`.
pub fn max3sat_to_ising(f: &Cnf3Formula, penalty: f64) -> Result<IsingHamiltonian> {
    if !(penalty >= 1.0) || !penalty.is_finite() {
        return Err(Error::Parameter(format!("Max3SAT penalty must be at least 1, got {penalty}")));
    }
    let mut q = Qubo::new(f.n_qubits());
    for (idx, clause) in f.clauses().iter().enumerate() {
        let [a, b, c] = clause.map(Affine::from);
        let w = Affine::plain(f.n_vars() + idx);

        q.add_constant(1.0);
        for lit in [a, b, c] {
            add_affine(&mut q, -1.0, lit);
        }
        add_product(&mut q, 1.0, a, b);
        add_product(&mut q, 1.0, a, c);
        add_product(&mut q, 1.0, b, c);
        add_product(&mut q, -1.0, w, c);

        add_product(&mut q, penalty, a, b);
        add_product(&mut q, -2.0 * penalty, a, w);
        add_product(&mut q, -2.0 * penalty, b, w);
        add_affine(&mut q, 3.0 * penalty, w);
    }
    q.to_ising()
}
