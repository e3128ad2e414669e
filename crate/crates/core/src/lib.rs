//! Regular and one-counter approximations of context-free grammars in lax
//! input-driven (LID) form and Greibach normal form, with parse-tree
//! reconstruction from accepting runs.
//!
//! The usual pipeline is [`grammar::parse_grammar`], then
//! [`automaton::build_lid_oca`] or [`automaton::build_gnf_oca`], then
//! [`runtime::run_oca`] and one of the reconstructions in [`trees`].
//! [`oracle`] gives exact membership for comparison.

pub mod analysis;
pub mod automaton;
pub mod error;
pub mod fixtures;
pub mod grammar;
pub mod oracle;
pub mod runtime;
pub mod sweep;
pub mod transform;
pub mod trees;

pub use error::{Error, Result};
