//! A laboratory for depth-two and depth-three threshold circuits.
//!
//! The crate provides exact integer-weight threshold gates and layered
//! circuits with bit-parallel truth tables ([`circuit`]), the explicit
//! constructions for Andreev's function and the PARITY approximator
//! ([`constructions`]), partition-structured random restrictions with exact
//! forcing tests ([`restrictions`]), seeded Monte Carlo estimators
//! ([`experiments`]), Chow parameters and LTF enumeration ([`chow`]), and
//! small-bias codes over GF(2^r) ([`codes`]).
//!
//! Heavy loops run on rayon when the `parallel` feature is enabled (the
//! default); see [`par`].

pub mod chow;
pub mod circuit;
pub mod codes;
pub mod constructions;
mod error;
pub mod experiments;
pub mod par;
pub mod restrictions;

pub use circuit::{Circuit, CircuitBuilder, Gate, GateOp, LinearThresholdGate, ModGate, TruthTable, Wire};
pub use error::{Error, Result};
