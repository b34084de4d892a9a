use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Clause-to-variable ratios treated as hard: the half-open interval `(lo, hi]`.
pub const HARD_ALPHA_RANGE: (f64, f64) = (3.5, 4.9);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn new(var: usize, negated: bool) -> Self {
        Literal { var, negated }
    }

    pub fn is_true(&self, assignment: u64) -> bool {
        let bit = (assignment >> self.var) & 1 == 1;
        bit != self.negated
    }
}

/// Random 3-CNF formula. Variable `v` takes the value of bit `v` of an
/// assignment word.
#[derive(Debug, Clone, PartialEq)]
pub struct Cnf3Formula {
    n_vars: usize,
    clauses: Vec<[Literal; 3]>,
    alpha: f64,
    seed: u64,
}

fn clause_count(n_vars: usize, alpha: f64) -> Result<usize> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Parameter(format!("alpha must be positive, got {alpha}")));
    }
    let m = (alpha * n_vars as f64).round();
    if m < 1.0 {
        return Err(Error::Parameter(format!("alpha = {alpha} with {n_vars} variables gives no clauses")));
    }
    Ok(m as usize)
}

impl Cnf3Formula {
    pub fn new(n_vars: usize, clauses: Vec<[Literal; 3]>, alpha: f64, seed: u64) -> Result<Self> {
        if n_vars < 3 {
            return Err(Error::Parameter(format!("3-CNF needs at least 3 variables, got {n_vars}")));
        }
        let expected = clause_count(n_vars, alpha)?;
        if clauses.len() != expected {
            return Err(Error::Parameter(format!(
                "expected round({alpha} * {n_vars}) = {expected} clauses, got {}",
                clauses.len()
            )));
        }
        for (idx, clause) in clauses.iter().enumerate() {
            let [a, b, c] = clause.map(|l| l.var);
            if a == b || a == c || b == c {
                return Err(Error::Parameter(format!("clause {idx} repeats a variable")));
            }
            if a.max(b).max(c) >= n_vars {
                return Err(Error::Parameter(format!("clause {idx} references a variable >= {n_vars}")));
            }
        }
        Ok(Cnf3Formula { n_vars, clauses, alpha, seed })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// One qubit per variable plus one ancilla per clause.
    pub fn n_qubits(&self) -> usize {
        self.n_vars + self.clauses.len()
    }

    pub fn is_hard(&self) -> bool {
        self.alpha > HARD_ALPHA_RANGE.0 && self.alpha <= HARD_ALPHA_RANGE.1
    }

    pub fn count_unsatisfied(&self, assignment: u64) -> usize {
        self.clauses.iter().filter(|c| !c.iter().any(|l| l.is_true(assignment))).count()
    }
}

/// Random 3-CNF with `round(alpha * n_vars)` clauses. Each clause draws three
/// distinct variables uniformly without replacement and negates each with
/// probability 1/2. Duplicate clauses may occur.
pub fn gen_3cnf(n_vars: usize, alpha: f64, seed: u64) -> Result<Cnf3Formula> {
    if n_vars < 3 {
        return Err(Error::Parameter(format!("3-CNF needs at least 3 variables, got {n_vars}")));
    }
    let m = clause_count(n_vars, alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            let vars = rand::seq::index::sample(&mut rng, n_vars, 3);
            let mut lits = [Literal::new(0, false); 3];
            for (slot, var) in lits.iter_mut().zip(vars.iter()) {
                *slot = Literal::new(var, rng.random_bool(0.5));
            }
            lits
        })
        .collect();
    Cnf3Formula::new(n_vars, clauses, alpha, seed)
}
