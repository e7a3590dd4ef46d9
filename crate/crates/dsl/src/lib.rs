//! Textual specification language for convergence experiments.
//!
//! A document declares an ideal, a piecewise sequence model, an optional
//! target law with its coupling, and a list of queries. Files use the
//! `.rcl` extension, UTF-8, with `#` comments.
//!
//! ```text
//! ideal density
//! sequence {
//!   family dyadic(j) {
//!     atom value 1/j prob 1 - 1/n^2
//!     atom value 1/(j+1) prob 1/n^2
//!   }
//! }
//! target { atom 0 : 1 } coupling independent
//! query cluster r=0
//! ```
//!
//! Parsing validates the document end to end (exact masses, piece coverage,
//! coupling shapes) and reports syntax and semantic diagnostics with source
//! positions. Printing emits a canonical text whose re-parse reproduces the
//! abstract document.

mod doc;
mod lexer;
mod parser;
mod printer;

pub use doc::{CouplingDecl, Query, SpecDocument, TargetDecl};
pub use parser::{parse, parse_index_set, Diagnostic};
pub use printer::{decay_to_string, print, probfn_to_string, valuefn_to_string};
