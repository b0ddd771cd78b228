//! Desk-scale dynamics of the lattice-truncated scalar field: Hamiltonian
//! matrices, Schrödinger evolution, Dyson terms, S-matrix and classical flow.

pub mod basis;
pub mod config;
pub mod evolution;
pub mod flow;
pub mod hamiltonian;
pub mod output;

pub use basis::{
    canonical_pairs, hermiticity_defect, low_lying_indices, restrict, spectral_norm, unitarity_defect, CMatrix,
    CVector, OperatorMatrix, WaveState,
};
pub use config::{LatticeConfig, Profile};
pub use evolution::{
    dyson, evolve, evolve_state, free_ground_state, s_matrix, FreeSpectrum, GroundState, Propagator, SMatrix,
    MAX_DYSON_ORDER,
};
pub use flow::{classical_flow, PhasePoint, Trajectory, DEFAULT_FLOW_DT};
pub use hamiltonian::{build_hamiltonian, lattice_symbol, HamiltonianParts, LatticeOperators};
pub use output::{matrix_from_value, matrix_to_value};
