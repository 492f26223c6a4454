//! Grid fields, potentials, the discretized Hamiltonian and time stepping.

pub mod grid;
pub mod hamiltonian;
pub mod potential;
pub mod propagate;

pub use grid::{FrequencyContent, Grid1D, GridField, Spectral};
pub use hamiltonian::{build_hamiltonian, hermiticity_residual, Hamiltonian};
pub use potential::{Drive, PotentialSpec, TimeProfile};
pub use propagate::{
    evolve, evolve_pair, evolve_with_spectrum, step_strang, EvolutionConfig, FreePositiveProjector,
    Integrator, Projection, StrangPropagator, Trajectory,
};
