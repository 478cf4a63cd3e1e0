//! Command-line surface for the toric vanishing checker: fan file parsing,
//! built-in fans, run reports with machine-readable certificates, and the
//! acceptance corpus.

pub mod builtin;
pub mod corpus;
pub mod document;
pub mod fandoc;
pub mod perversity;
pub mod report;
pub mod run;
