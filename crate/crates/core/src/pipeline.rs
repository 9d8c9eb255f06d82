//! The shared parse → group → resolve → validate → aggregate sequence.

use crate::diagnostics::DiagnosticsReport;
use crate::emit::{check_image_manifest, DatasetOptions, SiteDataset};
use crate::ingest::{group_recipes, parse_table, ColumnMapping, IngestError};
use crate::viz::VizError;
use crate::vocab::{resolve_corpus, validate_corpus, VocabularySet};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Viz(#[from] VizError),
}

/// A fully resolved corpus plus every diagnostic raised on the way.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub dataset: SiteDataset,
    pub report: DiagnosticsReport,
}

/// Runs everything short of writing files. `vocab_report` holds the
/// diagnostics from loading `vocab` and is folded into the result.
pub fn analyze(
    table: &[u8],
    mapping: &ColumnMapping,
    vocab: &VocabularySet,
    vocab_report: DiagnosticsReport,
    strict: bool,
    options: DatasetOptions,
) -> Result<Analysis, AnalysisError> {
    let mut report = vocab_report;
    let parsed = parse_table(table, mapping)?;
    report.extend(parsed.diagnostics);
    let (mut cookbooks, group_report) = group_recipes(&parsed.rows);
    report.extend(group_report);
    resolve_corpus(&mut cookbooks, vocab);
    report.extend(validate_corpus(&cookbooks, vocab, strict));
    let (dataset, viz_report) = SiteDataset::build(cookbooks, vocab, options)?;
    report.extend(viz_report);
    Ok(Analysis { dataset, report })
}

impl Analysis {
    pub fn check_images(&mut self, images_dir: &std::path::Path) {
        let images = check_image_manifest(&self.dataset, images_dir);
        self.report.extend(images);
    }
}
