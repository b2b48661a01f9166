//! Phase-separation dynamics for binary systems.
//!
//! This crate classifies and simulates the dynamic phase transitions of the
//! conserved order-parameter equation
//!
//! ```text
//! du/dt = -Lap^2 u - lambda Lap u + Lap(gamma2 u^2 + gamma3 u^3),   int u = 0,
//! ```
//!
//! and of its entropy-coupled extension, on boxes with no-flux walls, thin
//! loops, and periodic tori. It provides:
//!
//! * closed-form transition criteria (continuous / jump / mixed) with
//!   thresholds, margins, predicted equilibrium structure and amplitudes
//!   ([`classify`]);
//! * the finite-dimensional reduced dynamics near onset: equilibria,
//!   Jacobians, straight-line orbits, origin stability, fold points
//!   ([`reduced`]);
//! * a pseudospectral semi-implicit time integrator with branch sweeps and
//!   critical-exponent fits to cross-check the criteria ([`solver`]);
//! * material-parameter maps to phase diagrams: critical curves, critical
//!   container size, metastable band, latent heat, heat-capacity jump
//!   ([`phase`]);
//! * a config-driven CLI (`spinodal`) emitting deterministic reports and
//!   CSV tables ([`cli`]).
//!
//! The accompanying mdbook guide under `book/` walks through the theory and
//! the API; its code snippets compile and run as doctests of this crate.

pub mod classify;
pub mod cli;
pub mod config;
pub mod domain;
pub mod error;
pub mod field;
pub mod phase;
pub mod reduced;
pub mod report;
pub mod solver;

mod book;

pub use domain::{build_basis, growth_rate, mode_product_integral, DomainKind, DomainSpec, ModeIndex, Parity};
pub use error::{Error, Result};
pub use field::SpectralField;
