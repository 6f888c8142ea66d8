//! Two-photon orbital-angular-momentum emission from a superconducting
//! light-emitting diode whose Cooper pairs carry a circulating supercurrent.
//!
//! The pipeline runs from BCS band parameters ([`bcs`]) through spectral
//! rates of the coherent and incoherent channels ([`spectral`]), OAM
//! overlap factors ([`modes`]) and the emitted pair density matrix
//! ([`pair_state`]) to fidelities against target states ([`metrics`]).
//! [`config`] and [`sweep`] turn TOML run files into CSV/JSON/SVG outputs.

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bcs;
pub mod config;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod modes;
pub mod pair_state;
pub mod quadrature;
pub mod spectral;
pub mod svg;
pub mod sweep;

pub use error::{Error, Result};
