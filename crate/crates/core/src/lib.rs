//! Signal rareness analysis for combinational gate-level netlists.
//!
//! The crate covers netlist ingestion ([`netlist`]), per-net probability and
//! rareness estimation ([`rareness`]), rareness-aware two-level area
//! optimization ([`optimizer`]), a small CDCL solver with Tseitin encoding
//! ([`sat`]), rare-trigger Trojan insertion ([`trojan`]), N-detect and
//! clique-activation test generation ([`testgen`]) and coverage reporting
//! ([`evaluator`]).

pub mod error;
pub mod evaluator;
pub mod netlist;
pub mod optimizer;
pub mod rareness;
pub mod sat;
pub mod testgen;
pub mod trojan;

pub use error::{Error, ErrorClass, Result};
