//! Entanglement and discord analysis for one-clean-qubit computations.
//!
//! Qubit 0 is the most significant bit of every basis index and is the clean
//! qubit of the input state.

pub mod bipartite;
pub mod circuits;
pub mod discord;
pub mod error;
pub mod linalg;
pub mod report;
pub mod rng;
pub mod search;
pub mod spectrum;
pub mod states;

pub use bipartite::{
    boundary_orbit_demo, enumerate_bipartitions, is_ppt, negativity, partial_transpose, Bipartition, OrbitDemo,
    PptVerdict,
};
pub use circuits::{
    cdqc1_unitary, dqc1_expectation, haar_random_unitary, normalized_trace_estimate, parse_circuit, sample_dqc1,
    Circuit, GateKind, PauliAxis, Unitary,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, SortedSpectrum};
pub use spectrum::{
    degenerate_ppt_condition, dqc1_all_cuts_bounds, dqc1_alpha_threshold, hildebrand_ppt_from_spectrum, johnston_sfs,
    lambda_matrix, realizable_orderings, DegeneratePair, OrderingPair,
};
pub use states::{depolarize, dqc1_spectrum, dqc1_state, tau_state, DensityMatrix};
