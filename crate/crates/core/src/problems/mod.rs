//! Problem instances and their diagonal Ising encodings.
//!
//! All three problems are encoded so that *lower* energy is better: the
//! ground states of the returned [`IsingHamiltonian`] are exactly the
//! optimal solutions. Spin convention: qubit `i` in basis state `k` has
//! `z_i = +1` when bit `i` of `k` is 0 and `z_i = -1` when it is 1.

mod cnf;
mod graph;
mod instance;
pub(crate) mod ising;
mod mapping;

pub use cnf::{gen_3cnf, Cnf3Formula, Literal, HARD_ALPHA_RANGE};
pub use graph::{gen_regular_graph, Graph};
pub use instance::{Instance, ProblemKind};
pub use ising::{spectrum_bounds, spectrum_bounds_with_cap, IsingHamiltonian, Qubo, SpectrumBounds};
pub use mapping::{
    max3sat_to_ising, maxcut_to_ising, vertexcover_to_ising, DEFAULT_MAX3SAT_PENALTY,
    DEFAULT_VERTEXCOVER_PENALTY,
};

/// SplitMix64 finaliser, used to derive independent sub-seeds.
pub(crate) fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z =
        seed.wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
