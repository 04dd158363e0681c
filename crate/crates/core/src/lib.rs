//! Relational multi-context systems.
//!
//! Contexts pair a knowledge base with a logic and are linked by bridge
//! rules. The crate evaluates equilibria, checks integrity constraints
//! against them, lifts several kinds of databases into systems and searches
//! for minimal repairs of managed systems.

pub mod constraints;
pub mod encoders;
pub mod equilibria;
pub mod error;
pub mod frontend;
pub mod grounding;
pub mod kernel;
pub mod logics;
pub mod oracle;
pub mod repair;

pub use error::{Error, LogicError, Result};
