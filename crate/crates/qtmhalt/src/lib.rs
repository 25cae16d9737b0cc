//! Exact simulation and analysis of quantum Turing machine halting
//! protocols.
//!
//! Amplitudes live in the field Q(i, sqrt2), represented exactly; every
//! probability, inner product and check in this crate is computed without
//! floating point unless a float rendering is explicitly requested.

pub mod amplitude;
pub mod checks;
pub mod cli;
pub mod compiler;
pub mod corpus;
pub mod dynamics;
pub mod format;
pub mod halting;
pub mod machine;
pub mod oracle;
