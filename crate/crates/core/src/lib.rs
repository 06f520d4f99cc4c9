//! Inverse scattering toolkit for the Sasa-Satsuma equation
//! `u_t + u_xxx + 6|u|^2 u_x + 3u(|u|^2)_x = 0`.
//!
//! The crate computes scattering data from decaying profiles, builds exact
//! N-soliton solutions from the reflectionless residue system, evaluates the
//! long-time asymptotic formulas in the three space-time regions and carries
//! an independent split-step Fourier integrator used as a numerical oracle.

pub mod asymptotics;
pub mod conjugation;
pub mod direct_scattering;
pub mod error;
pub mod field;
pub mod interp;
pub mod io;
pub mod linalg;
pub mod ode;
pub mod painleve2;
pub mod pde_oracle;
pub mod quadrature;
pub mod registry;
pub mod soliton_engine;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use field::ComplexField;
pub use num_complex::Complex64;
