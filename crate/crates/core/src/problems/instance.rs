use std::path::Path;

use serde::{Deserialize, Serialize};

use super::cnf::{Cnf3Formula, Literal};
use super::graph::Graph;
use super::ising::IsingHamiltonian;
use super::mapping::{max3sat_to_ising, maxcut_to_ising, vertexcover_to_ising};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Maxcut,
    Vertexcover,
    Max3sat,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Maxcut => "maxcut",
            ProblemKind::Vertexcover => "vertexcover",
            ProblemKind::Max3sat => "max3sat",
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maxcut" => Ok(ProblemKind::Maxcut),
            "vertexcover" => Ok(ProblemKind::Vertexcover),
            "max3sat" => Ok(ProblemKind::Max3sat),
            other => Err(Error::Parameter(format!("unknown problem kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRecord {
    n: usize,
    seed: u64,
    edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct CnfRecord {
    n_vars: usize,
    alpha: f64,
    seed: u64,
    clauses: Vec<[(usize, bool); 3]>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Record {
    Maxcut(GraphRecord),
    Vertexcover(GraphRecord),
    Max3sat(CnfRecord),
}

/// A problem instance as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Maxcut(Graph),
    Vertexcover(Graph),
    Max3sat(Cnf3Formula),
}

impl Instance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Instance::Maxcut(_) => ProblemKind::Maxcut,
            Instance::Vertexcover(_) => ProblemKind::Vertexcover,
            Instance::Max3sat(_) => ProblemKind::Max3sat,
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            Instance::Maxcut(g) | Instance::Vertexcover(g) => g.n_vertices(),
            Instance::Max3sat(f) => f.n_qubits(),
        }
    }

    /// Ising encoding. `penalty` is ignored for MaxCut.
    pub fn to_ising(&self, penalty: f64) -> Result<IsingHamiltonian> {
        match self {
            Instance::Maxcut(g) => maxcut_to_ising(g),
            Instance::Vertexcover(g) => vertexcover_to_ising(g, penalty),
            Instance::Max3sat(f) => max3sat_to_ising(f, penalty),
        }
    }

    fn to_record(&self) -> Record {
        let graph = |g: &Graph| GraphRecord {
            n: g.n_vertices(),
            seed: g.seed(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
        };
        match self {
            Instance::Maxcut(g) => Record::Maxcut(graph(g)),
            Instance::Vertexcover(g) => Record::Vertexcover(graph(g)),
            Instance::Max3sat(f) => Record::Max3sat(CnfRecord {
                n_vars: f.n_vars(),
                alpha: f.alpha(),
                seed: f.seed(),
                clauses: f.clauses().iter().map(|c| c.map(|l| (l.var, l.negated))).collect(),
            }),
        }
    }

    fn from_record(r: Record) -> Result<Self> {
        let graph = |g: GraphRecord| Graph::new(g.n, g.edges.into_iter().map(|[a, b]| (a, b)), g.seed);
        Ok(match r {
            Record::Maxcut(g) => Instance::Maxcut(graph(g)?),
            Record::Vertexcover(g) => Instance::Vertexcover(graph(g)?),
            Record::Max3sat(c) => {
                let clauses =
                    c.clauses.into_iter().map(|cl| cl.map(|(v, neg)| Literal::new(v, neg))).collect();
                Instance::Max3sat(Cnf3Formula::new(c.n_vars, clauses, c.alpha, c.seed)?)
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("instance records always serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: Record =
            serde_json::from_str(text).map_err(|e| Error::Parameter(format!("bad instance JSON: {e}")))?;
        Self::from_record(record)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::format(path, e))
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn hash(&self) -> String {
        crate::io::sha256_hex(self.to_json().as_bytes())
    }
}
