//! Charge-symmetric Dirac theory restricted to positive frequencies.
//!
//! Particle and antiparticle wave functions are the positive-frequency
//! solutions of the Dirac equation with charge e and −e; negative-frequency
//! content is expressed through them by charge conjugation. The crate covers
//! the exact spinor algebra, free plane waves, frequency splitting on a
//! periodic 1-D grid, time evolution, the bilinear observables and two
//! scenario drivers (step scattering and the mean-position jitter of
//! mixed-frequency packets).

pub mod error;
pub mod evolution;
pub mod frequency_split;
pub mod observables;
pub mod plane_waves;
pub mod scenarios;
pub mod spinor_algebra;

pub use error::{DiracError, Result};
pub use evolution::{EvolutionConfig, Grid1D, GridField, PotentialSpec, Projection};
pub use plane_waves::{PhysicalConstants, Species, Spin};
pub use spinor_algebra::{make_gammas, Bispinor, GammaSet};
