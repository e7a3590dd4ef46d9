//! Library surface of the command line: the document runner, the report
//! schema, and the reproduction registry (exposed for the acceptance suite).

pub mod registry;
pub mod report;
pub mod runner;
