//! Compiles a crowdsourced cookbook transcription table into the static JSON
//! files behind a browsable recipe collection.

pub mod aggregate;
pub mod cli;
pub mod diagnostics;
pub mod emit;
pub mod ingest;
pub mod model;
pub mod pipeline;
pub mod text;
pub mod viz;
pub mod vocab;

pub use diagnostics::{Diagnostic, DiagnosticsReport, Severity};
pub use model::{AnnotationRow, Cookbook, IngredientUse, Recipe};
