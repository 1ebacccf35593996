//! Boolean equation solving over propositional formulas with quantification
//! upon atoms.

mod bits;
pub mod cli;
pub mod elimination;
pub mod formula;
pub mod oracle;
pub mod parser;
mod printer;
pub mod random;
pub mod semantics;
pub mod solve;

pub use formula::{AtomSet, Formula, Polarity};
pub use parser::{parse, ParseError};
