//! Numerical models of detector-defined interference in seeded
//! parametric photon sources, together with the truncated Fock-space
//! machinery used to cross-check every closed-form result.
//!
//! The crate is organized around one physical idea: a detector couples to
//! the field through a linear operator whose kernel is invisible
//! ("dark") and whose row space is visible ("bright"). Everything else
//! is bookkeeping on top of that decomposition:
//!
//! - [`fock`] — dense multi-mode Fock states, tensor products, partial
//!   traces. This is the brute-force oracle layer.
//! - [`collective`] — bright/dark decomposition of an arbitrary
//!   detector-field coupling operator.
//! - [`enbs`] — the two-source seeded downconverter model: prepared-state
//!   phases, idler overlap, reduced signal density matrix, visibility
//!   laws, and the Fock-space oracle that validates them.
//! - [`scan`] — simulated fringe-scan experiments: phase scans, Poisson
//!   count emulation, sinusoid fitting, Bloch-circle mapping, photon
//!   budgets, and pulse-train spectra.
//! - [`unified`] — the Λ-system, N-slit, M-source and continuous-slit
//!   instances of the same bright/dark skeleton.
//! - [`io`] — CSV emitters for the dataset types.

// guards of the form `!(x > 0.0)` are deliberate: they reject NaN along
// with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collective;
pub mod enbs;
pub mod error;
pub mod fock;
pub mod io;
pub mod scan;
pub mod unified;

pub use collective::{CollectiveSystem, CouplingOperator, ModeBasis};
pub use enbs::{BlochState, EnbsConfig, PumpParams, SignalDensity};
pub use error::{Error, Result};
pub use fock::{DensityMatrix, ModeSpace, MultiModeState};
pub use scan::{CombSpec, FitResult, FringeDataset, ScanSpec, ScanTarget};
pub use unified::{DirichletSpec, G2Input, LambdaSpec, SlitSpec};
