//! Command-line front end for Perron expansions of Puiseux matrices.
//!
//! Matrices are read from text files (see [`document`]); the commands in
//! [`commands`] run the driver or single stages and print plain text or JSON.

pub mod commands;
pub mod document;
pub mod json;
pub mod parse;

pub use commands::{cmd_flatten, cmd_perron, cmd_tropical, cmd_validate, PerronArgs};
pub use document::MatrixDocument;
pub use parse::{format_entry, parse_entry, ParseError};
