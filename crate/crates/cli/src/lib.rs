//! Command-line front end: reports, the dimension table and witnesses.

pub mod app;
pub mod render;
pub mod reports;
pub mod table;
pub mod witness;

pub use app::{run, Cli, Outcome};
pub use deltader_core::{build, Family, FamilySpec};
