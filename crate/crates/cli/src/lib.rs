//! Command-line front end: the graph document format, command dispatch and
//! certificate output.

pub mod app;
pub mod certificate;
pub mod dsl;
pub mod render;

pub use app::{run, Outcome};
