//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the simulator or the encodings' own evaluation paths.
#![allow(dead_code)]

use num_complex::Complex64;
use qaoa_landscape::problems::{Cnf3Formula, Graph, IsingHamiltonian};
use qaoa_landscape::ParamPoint;

/// Dense row-major complex matrix.
#[derive(Clone)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Dense {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        Dense { dim, data }
    }

    pub fn from_2x2(m: [[Complex64; 2]; 2]) -> Self {
        Dense { dim: 2, data: vec![m[0][0], m[0][1], m[1][0], m[1][1]] }
    }

    pub fn kron(&self, other: &Dense) -> Dense {
        let dim = self.dim * other.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.data[r1 * self.dim + c1];
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        let row = r1 * other.dim + r2;
                        let col = c1 * other.dim + c2;
                        data[row * dim + col] = a * other.data[r2 * other.dim + c2];
                    }
                }
            }
        }
        Dense { dim, data }
    }

    pub fn add_scaled(&mut self, other: &Dense, s: f64) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim).map(|r| (0..self.dim).map(|c| self.data[r * self.dim + c] * v[c]).sum()).collect()
    }
}

/// `op` acting on qubit `q` of an `n`-qubit register (qubit q = bit q of the
/// basis index, so qubit 0 is the rightmost Kronecker factor).
fn on_qubit(n: usize, q: usize, op: &Dense) -> Dense {
    let id = Dense::identity(2);
    let mut m = Dense::identity(1);
    for k in (0..n).rev() {
        m = m.kron(if k == q { op } else { &id });
    }
    m
}

fn pauli_z() -> Dense {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    Dense::from_2x2([[o, z], [z, -o]])
}

/// `H_C` assembled from Pauli-Z Kronecker products.
pub fn dense_hamiltonian(h: &IsingHamiltonian) -> Dense {
    let n = h.n_qubits();
    let z = pauli_z();
    let mut m = Dense::identity(1 << n);
    for v in m.data.iter_mut() {
        *v *= h.offset();
    }
    for (&(i, j), &c) in h.couplings() {
        let zi = on_qubit(n, i, &z);
        let zj = on_qubit(n, j, &z);
        // product of two diagonal matrices
        let mut zz = zi.clone();
        for k in 0..zz.dim {
            zz.data[k * zz.dim + k] = zi.data[k * zi.dim + k] * zj.data[k * zj.dim + k];
        }
        m.add_scaled(&zz, c);
    }
    for (i, &c) in h.fields().iter().enumerate() {
        m.add_scaled(&on_qubit(n, i, &z), c);
    }
    m
}

/// `<gamma, beta| H |gamma, beta>` by explicit matrix evolution.
pub fn dense_expectation(h: &IsingHamiltonian, params: &ParamPoint) -> f64 {
    let n = h.n_qubits();
    let dim = 1 << n;
    let hm = dense_hamiltonian(h);
    let mut psi = vec![Complex64::new((dim as f64).sqrt().recip(), 0.0); dim];
    for (&g, &b) in params.gammas().iter().zip(params.betas()) {
        // exp(-i g H): H is diagonal in this basis by construction
        let mut uc = Dense::identity(dim);
        for k in 0..dim {
            uc.data[k * dim + k] = Complex64::from_polar(1.0, -g * hm.data[k * dim + k].re);
        }
        psi = uc.matvec(&psi);
        let (c, s) = (Complex64::new(b.cos(), 0.0), Complex64::new(0.0, -b.sin()));
        let rx = Dense::from_2x2([[c, s], [s, c]]);
        let mut ub = Dense::identity(1);
        for _ in 0..n {
            ub = ub.kron(&rx);
        }
        psi = ub.matvec(&psi);
    }
    let hpsi = hm.matvec(&psi);
    psi.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum()
}

pub fn cut_size(g: &Graph, side: u64) -> usize {
    g.edges().iter().filter(|&&(a, b)| ((side >> a) & 1) != ((side >> b) & 1)).count()
}

pub fn brute_force_max_cut(g: &Graph) -> usize {
    (0..1u64 << g.n_vertices()).map(|s| cut_size(g, s)).max().unwrap()
}

pub fn is_cover(g: &Graph, set: u64) -> bool {
    g.edges().iter().all(|&(a, b)| (set >> a) & 1 == 1 || (set >> b) & 1 == 1)
}

/// All minimum vertex covers as bitmasks (bit set = vertex chosen).
pub fn minimum_vertex_covers(g: &Graph) -> Vec<u64> {
    let covers: Vec<u64> = (0..1u64 << g.n_vertices()).filter(|&s| is_cover(g, s)).collect();
    let best = covers.iter().map(|s| s.count_ones()).min().unwrap();
    covers.into_iter().filter(|s| s.count_ones() == best).collect()
}

pub fn clause_satisfied(f: &Cnf3Formula, clause: usize, x: u64) -> bool {
    f.clauses()[clause].iter().any(|l| (((x >> l.var) & 1) == 1) != l.negated)
}

pub fn satisfied_count(f: &Cnf3Formula, x: u64) -> usize {
    (0..f.clauses().len()).filter(|&c| clause_satisfied(f, c, x)).count()
}

pub fn brute_force_max_sat(f: &Cnf3Formula) -> usize {
    (0..1u64 << f.n_vars()).map(|x| satisfied_count(f, x)).max().unwrap()
}

/// Assignment of variables extended with ancillas `w = a * b` for the first
/// two literals of every clause.
pub fn with_consistent_ancillas(f: &Cnf3Formula, x: u64) -> u64 {
    let mut state = x;
    for (idx, clause) in f.clauses().iter().enumerate() {
        let lit = |k: usize| (((x >> clause[k].var) & 1) == 1) != clause[k].negated;
        if lit(0) && lit(1) {
            state |= 1 << (f.n_vars() + idx);
        }
    }
    state
}

/// Lowest point of a dense `(gamma, beta)` sweep at p = 1 using the dense oracle.
pub fn dense_grid_min(h: &IsingHamiltonian, gammas: &[f64], betas: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for &g in gammas {
        for &b in betas {
            let p = ParamPoint::new(vec![g], vec![b]).unwrap();
            best = best.min(dense_expectation(h, &p));
        }
    }
    best
}
