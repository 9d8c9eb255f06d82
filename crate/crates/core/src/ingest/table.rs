//! TSV working-table reader.

use std::collections::HashMap;

use crate::diagnostics::{codes, Diagnostic, DiagnosticsReport};
use crate::ingest::fields::{parse_year, split_multivalue};
use crate::ingest::IngestError;
use crate::model::AnnotationRow;
use crate::text::non_absent;

/// Header name for each semantic field of the working table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMapping {
    pub notebook: String,
    pub year_from: String,
    pub year_to: String,
    pub time_qualifier: String,
    pub place: String,
    pub region: String,
    pub country: String,
    pub author: String,
    pub images: String,
    pub pages: String,
    pub chapter: String,
    pub recipe_title: String,
    pub ingredient: String,
    pub quantity: String,
    pub unit: String,
    pub course: String,
    pub scope: String,
    pub procedures: String,
    pub serves: String,
    pub prep_time: String,
    pub cook_time: String,
    pub temperature: String,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        Self {
            notebook: "Notebook".into(),
            year_from: "From".into(),
            year_to: "To".into(),
            time_qualifier: "Time qualifier".into(),
            place: "Place".into(),
            region: "Region".into(),
            country: "Country".into(),
            author: "Author surname name".into(),
            images: "Img nome".into(),
            pages: "Pag. numero".into(),
            chapter: "Title chapter".into(),
            recipe_title: "Title Recipe".into(),
            ingredient: "Ingredient".into(),
            quantity: "Quantity".into(),
            unit: "Unit".into(),
            course: "Category".into(),
            scope: "Scope".into(),
            procedures: "Procedure".into(),
            serves: "Serves".into(),
            prep_time: "Preparation time".into(),
            cook_time: "Cooking time".into(),
            temperature: "Temperature".into(),
        }
    }
}

/// Semantic field keys, in table order. These are also the keys accepted by
/// [`ColumnMapping::set`] and the column names used in diagnostics.
pub const FIELD_KEYS: [&str; 22] = [
    "notebook",
    "year_from",
    "year_to",
    "time_qualifier",
    "place",
    "region",
    "country",
    "author",
    "images",
    "pages",
    "chapter",
    "recipe_title",
    "ingredient",
    "quantity",
    "unit",
    "course",
    "scope",
    "procedures",
    "serves",
    "prep_time",
    "cook_time",
    "temperature",
];

const MANDATORY: [&str; 2] = ["notebook", "recipe_title"];

impl ColumnMapping {
    /// Overrides the header for `key`; returns `false` for unknown keys.
    pub fn set(&mut self, key: &str, header: impl Into<String>) -> bool {
        let slot = match key {
            "notebook" => &mut self.notebook,
            "year_from" => &mut self.year_from,
            "year_to" => &mut self.year_to,
            "time_qualifier" => &mut self.time_qualifier,
            "place" => &mut self.place,
            "region" => &mut self.region,
            "country" => &mut self.country,
            "author" => &mut self.author,
            "images" => &mut self.images,
            "pages" => &mut self.pages,
            "chapter" => &mut self.chapter,
            "recipe_title" => &mut self.recipe_title,
            "ingredient" => &mut self.ingredient,
            "quantity" => &mut self.quantity,
            "unit" => &mut self.unit,
            "course" => &mut self.course,
            "scope" => &mut self.scope,
            "procedures" => &mut self.procedures,
            "serves" => &mut self.serves,
            "prep_time" => &mut self.prep_time,
            "cook_time" => &mut self.cook_time,
            "temperature" => &mut self.temperature,
            _ => return false,
        };
        *slot = header.into();
        true
    }

    pub fn header(&self, key: &str) -> Option<&str> {
        let header = match key {
            "notebook" => &self.notebook,
            "year_from" => &self.year_from,
            "year_to" => &self.year_to,
            "time_qualifier" => &self.time_qualifier,
            "place" => &self.place,
            "region" => &self.region,
            "country" => &self.country,
            "author" => &self.author,
            "images" => &self.images,
            "pages" => &self.pages,
            "chapter" => &self.chapter,
            "recipe_title" => &self.recipe_title,
            "ingredient" => &self.ingredient,
            "quantity" => &self.quantity,
            "unit" => &self.unit,
            "course" => &self.course,
            "scope" => &self.scope,
            "procedures" => &self.procedures,
            "serves" => &self.serves,
            "prep_time" => &self.prep_time,
            "cook_time" => &self.cook_time,
            "temperature" => &self.temperature,
            _ => return None,
        };
        Some(header)
    }
}

#[derive(Debug, Default)]
pub struct ParsedTable {
    pub rows: Vec<AnnotationRow>,
    pub diagnostics: DiagnosticsReport,
}

/// Parses a UTF-8 TSV working table.
///
/// The first line is the header; columns are located through `mapping`
/// (case-insensitive, trimmed). Fails on non-UTF-8 input or when the notebook
/// or recipe-title column is missing. Rows with an empty notebook or recipe
/// title are dropped and reported.
pub fn parse_table(bytes: &[u8], mapping: &ColumnMapping) -> Result<ParsedTable, IngestError> {
    let text = std::str::from_utf8(bytes).map_err(|e| IngestError::NotUtf8 {
        offset: e.valid_up_to(),
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .flexible(true)
        .has_headers(true)
        .from_reader(text.as_bytes());

    let headers = reader.headers()?.clone();
    let mut positions: HashMap<String, usize> = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        positions.entry(h.trim().to_lowercase()).or_insert(i);
    }

    let mut diagnostics = DiagnosticsReport::new();
    let mut index: HashMap<&'static str, usize> = HashMap::new();
    let mut missing_mandatory = Vec::new();
    for key in FIELD_KEYS {
        let header = mapping.header(key).expect("every field key has a header");
        match positions.get(&header.trim().to_lowercase()) {
            Some(&i) => {
                index.insert(key, i);
            }
            None if MANDATORY.contains(&key) => missing_mandatory.push(header.to_owned()),
            None => diagnostics.push(
                Diagnostic::warning(
                    codes::MISSING_COLUMN,
                    format!("column {header:?} not found in header; field {key} left empty"),
                )
                .at_row(1)
                .at_column(key),
            ),
        }
    }
    if !missing_mandatory.is_empty() {
        return Err(IngestError::MissingColumns(missing_mandatory));
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.iter().all(|c| c.trim().is_empty()) {
            continue;
        }
        let line = record.position().map_or(0, |p| p.line() as usize);
        let cell = |key: &str| -> &str {
            index
                .get(key)
                .and_then(|&i| record.get(i))
                .unwrap_or_default()
        };
        let opt = |key: &str| non_absent(cell(key)).map(str::to_owned);

        let notebook_title = cell("notebook").trim().to_owned();
        let recipe_title = cell("recipe_title").trim().to_owned();
        if notebook_title.is_empty() {
            diagnostics.push(
                Diagnostic::error(codes::EMPTY_NOTEBOOK, "row has no notebook title; skipped")
                    .at_row(line)
                    .at_column("notebook"),
            );
            continue;
        }
        if recipe_title.is_empty() {
            diagnostics.push(
                Diagnostic::error(codes::EMPTY_RECIPE_TITLE, "row has no recipe title; skipped")
                    .at_row(line)
                    .at_column("recipe_title"),
            );
            continue;
        }

        let mut year = |key: &str| match parse_year(cell(key)) {
            Ok(y) => y,
            Err(issue) => {
                diagnostics.push(
                    Diagnostic::warning(codes::INVALID_YEAR, issue.message)
                        .at_row(line)
                        .at_column(key),
                );
                None
            }
        };
        let year_from = year("year_from");
        let year_to = year("year_to");

        rows.push(AnnotationRow {
            notebook_title,
            year_from,
            year_to,
            time_qualifier: opt("time_qualifier"),
            place: opt("place"),
            region: opt("region"),
            country: opt("country"),
            author: opt("author"),
            image_names: split_multivalue(cell("images")),
            page_numbers: split_multivalue(cell("pages")),
            chapter_title: opt("chapter"),
            recipe_title,
            ingredient: opt("ingredient"),
            quantity: opt("quantity"),
            unit: opt("unit"),
            course_type: opt("course"),
            scope: opt("scope"),
            procedures: split_multivalue(cell("procedures")),
            serves: opt("serves"),
            prep_time: opt("prep_time"),
            cook_time: opt("cook_time"),
            temperature: opt("temperature"),
            source_row: line,
        });
    }
    Ok(ParsedTable { rows, diagnostics })
}
