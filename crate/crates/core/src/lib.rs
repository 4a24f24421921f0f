//! Simulation library for quantum emitters coupled to aperiodic
//! (Fibonacci-Lucas) coupled-resonator waveguides.
//!
//! - [`words`]: (p,q)-Lucas substitution words and hopping sequences
//! - [`lattice`]: single-excitation Hamiltonians (uniform, SSH, Fibonacci, AAH, plus emitters)
//! - [`spectral`]: eigendecompositions, DOS, central gap, IPR scaling
//! - [`multifractal`]: box-counting singularity spectra
//! - [`bound_states`]: closed-form vacancy-like dressed states
//! - [`effective`]: photon-mediated emitter Hamiltonian and its block structure
//! - [`dynamics`]: exact and effective single-excitation evolution
//! - [`cli`]: the `fibwqed` command-line front end
//!
//! Nothing in the crate is random; identical inputs give identical outputs.

pub mod bound_states;
pub mod cli;
pub mod dynamics;
pub mod effective;
pub mod eigen;
pub mod error;
pub mod fit;
pub mod lattice;
pub mod linalg;
pub mod multifractal;
pub mod spectral;
pub mod words;

pub use error::{Error, Result};

/// Formats a float with 17 significant digits (round-trip exact).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
