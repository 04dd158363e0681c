//! The text format: parsing with positioned diagnostics, canonical
//! serialization, conversion to and from systems, and structured reports.

mod convert;
mod document;
mod lexer;
mod parser;
pub mod report;

pub use convert::{format_ic, from_mcs, load, to_mcs};
pub use document::{serialize, BodyItem, BridgeDecl, ContextDecl, Document, DomainDecl, IcDecl, ManageDecl, SignatureDecl};
pub use lexer::{Diagnostic, Pos};
pub use parser::{parse, parse_denial};
