//! Structured validation findings with row/column coordinates.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

/// Diagnostic codes emitted across the pipeline.
pub mod codes {
    pub const MISSING_COLUMN: &str = "missing_column";
    pub const EMPTY_NOTEBOOK: &str = "empty_notebook";
    pub const EMPTY_RECIPE_TITLE: &str = "empty_recipe_title";
    pub const INVALID_YEAR: &str = "invalid_year";
    pub const YEAR_ORDER: &str = "year_order";
    pub const PAGE_IMAGE_MISMATCH: &str = "page_image_mismatch";
    pub const UNPARSEABLE_QUANTITY: &str = "unparseable_quantity";
    pub const UNPARSEABLE_SERVES: &str = "unparseable_serves";
    pub const MALFORMED_INGREDIENT: &str = "malformed_ingredient";
    pub const INVALID_ACQUISITION_DATE: &str = "invalid_acquisition_date";
    pub const INCONSISTENT_GROUP: &str = "inconsistent_group";
    pub const DUPLICATE_COOKBOOK_ID: &str = "duplicate_cookbook_id";

    pub const MISSING_VOCABULARY: &str = "missing_vocabulary";
    pub const MALFORMED_VOCABULARY_LINE: &str = "malformed_vocabulary_line";
    pub const DUPLICATE_TERM: &str = "duplicate_term";
    pub const CONFLICTING_VARIANT: &str = "conflicting_variant";
    pub const GEOGRAPHY_CONFLICT: &str = "geography_conflict";

    pub const UNKNOWN_INGREDIENT: &str = "unknown_ingredient";
    pub const UNKNOWN_COURSE: &str = "unknown_course";
    pub const UNKNOWN_PROCEDURE: &str = "unknown_procedure";
    pub const UNKNOWN_UNIT: &str = "unknown_unit";
    pub const UNKNOWN_SCOPE: &str = "unknown_scope";
    pub const UNKNOWN_CITY: &str = "unknown_city";

    pub const MISSING_COORDINATES: &str = "missing_coordinates";
    pub const MATRIX_CAPPED: &str = "matrix_capped";

    pub const MISSING_IMAGE: &str = "missing_image";
    pub const ORPHAN_IMAGE: &str = "orphan_image";
    pub const IMAGES_DIR_MISSING: &str = "images_dir_missing";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Warning => f.write_str("warning"),
            Severity::Error => f.write_str("error"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    /// 1-based line in the source file, header included.
    pub row: Option<usize>,
    pub column: Option<String>,
    /// Originating file when it is not the working table (vocabulary files).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

impl Diagnostic {
    pub fn new(severity: Severity, code: &str, message: impl Into<String>) -> Self {
        Self {
            severity,
            code: code.to_owned(),
            message: message.into(),
            row: None,
            column: None,
            file: None,
        }
    }

    pub fn error(code: &str, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, code, message)
    }

    pub fn warning(code: &str, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, code, message)
    }

    #[must_use]
    pub fn at_row(mut self, row: usize) -> Self {
        self.row = Some(row);
        self
    }

    #[must_use]
    pub fn at_column(mut self, column: impl Into<String>) -> Self {
        self.column = Some(column.into());
        self
    }

    #[must_use]
    pub fn in_file(mut self, file: impl Into<String>) -> Self {
        self.file = Some(file.into());
        self
    }

    fn sort_key(&self) -> (Option<usize>, Option<&str>, &str) {
        (self.row, self.column.as_deref(), &self.code)
    }

    fn identity(&self) -> (Option<usize>, Option<&str>, &str, &str, Option<&str>) {
        (
            self.row,
            self.column.as_deref(),
            &self.code,
            &self.message,
            self.file.as_deref(),
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.severity, self.code)?;
        let mut location = Vec::new();
        if let Some(file) = &self.file {
            location.push(file.clone());
        }
        if let Some(row) = self.row {
            location.push(format!("row {row}"));
        }
        if let Some(column) = &self.column {
            location.push(format!("column {column}"));
        }
        if !location.is_empty() {
            write!(f, " {}", location.join(", "))?;
        }
        write!(f, ": {}", self.message)
    }
}

/// An ordered collection of diagnostics.
///
/// Entries are kept sorted by `(row, column, code)`; ties keep insertion
/// order. Entries identical in everything but severity collapse into one,
/// keeping the more severe.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiagnosticsReport {
    entries: Vec<Diagnostic>,
}

impl DiagnosticsReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, diagnostic: Diagnostic) {
        let key = diagnostic.sort_key();
        let start = self
            .entries
            .partition_point(|e| e.sort_key().cmp(&key) == Ordering::Less);
        let end = self
            .entries
            .partition_point(|e| e.sort_key().cmp(&key) != Ordering::Greater);
        if let Some(existing) = self.entries[start..end]
            .iter_mut()
            .find(|e| e.identity() == diagnostic.identity())
        {
            existing.severity = existing.severity.max(diagnostic.severity);
            return;
        }
        self.entries.insert(end, diagnostic);
    }

    pub fn extend(&mut self, other: DiagnosticsReport) {
        for d in other.entries {
            self.push(d);
        }
    }

    pub fn entries(&self) -> &[Diagnostic] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn error_count(&self) -> usize {
        self.count(Severity::Error)
    }

    pub fn warning_count(&self) -> usize {
        self.count(Severity::Warning)
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.entries.iter().filter(|e| e.severity == severity).count()
    }

    pub fn has_errors(&self) -> bool {
        self.error_count() > 0
    }

    pub fn with_code<'a>(&'a self, code: &'a str) -> impl Iterator<Item = &'a Diagnostic> + 'a {
        self.entries.iter().filter(move |e| e.code == code)
    }

    /// `"N errors, M warnings"`.
    pub fn summary(&self) -> String {
        format!(
            "{} errors, {} warnings",
            self.error_count(),
            self.warning_count()
        )
    }
}

impl FromIterator<Diagnostic> for DiagnosticsReport {
    fn from_iter<I: IntoIterator<Item = Diagnostic>>(iter: I) -> Self {
        let mut report = DiagnosticsReport::new();
        for d in iter {
            report.push(d);
        }
        report
    }
}

impl Serialize for DiagnosticsReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            entries: &'a [Diagnostic],
            errors: usize,
            warnings: usize,
        }
        Repr {
            entries: &self.entries,
            errors: self.error_count(),
            warnings: self.warning_count(),
        }
        .serialize(serializer)
    }
}
