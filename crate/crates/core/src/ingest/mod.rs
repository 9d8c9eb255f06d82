//! Working-table ingestion: TSV parsing, cell parsers and grouping.

mod fields;
mod group;
mod table;

pub use fields::{
    format_quantity, parse_acquisition_from_filename, parse_ingredient_name, parse_quantity,
    parse_serves, parse_year, split_multivalue, FieldIssue, IngredientName, Quantity,
};
pub use group::group_recipes;
pub use table::{parse_table, ColumnMapping, ParsedTable, FIELD_KEYS};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("input is not valid UTF-8 (first invalid byte at offset {offset})")]
    NotUtf8 { offset: usize },
    #[error("missing mandatory column(s): {}", .0.join(", "))]
    MissingColumns(Vec<String>),
    #[error("malformed table: {0}")]
    Csv(#[from] csv::Error),
}
