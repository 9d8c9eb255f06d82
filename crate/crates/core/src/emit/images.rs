use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use crate::diagnostics::{codes, Diagnostic, DiagnosticsReport};
use crate::emit::SiteDataset;
use crate::model::recipes;

/// Cross-checks recipe image references against the files in `images_dir`.
pub fn check_image_manifest(dataset: &SiteDataset, images_dir: &Path) -> DiagnosticsReport {
    let mut report = DiagnosticsReport::new();
    let entries = match fs::read_dir(images_dir) {
        Ok(entries) => entries,
        Err(_) => {
            report.push(
                Diagnostic::warning(
                    codes::IMAGES_DIR_MISSING,
                    format!("images directory {} not found; image check skipped", images_dir.display()),
                )
                .in_file(images_dir.display().to_string()),
            );
            return report;
        }
    };
    let on_disk: BTreeSet<String> = entries
        .filter_map(Result::ok)
        .filter(|e| e.file_type().map(|t| t.is_file()).unwrap_or(false))
        .filter_map(|e| e.file_name().into_string().ok())
        .filter(|name| !name.starts_with('.'))
        .collect();

    let mut referenced: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (_, recipe) in recipes(&dataset.cookbooks) {
        for image in &recipe.images {
            referenced.entry(image).or_default().push(&recipe.id);
        }
    }

    for (image, ids) in &referenced {
        if !on_disk.contains(*image) {
            report.push(
                Diagnostic::warning(
                    codes::MISSING_IMAGE,
                    format!("image \"{image}\" referenced by {} is missing", ids.join(", ")),
                )
                .in_file(images_dir.join(image).display().to_string()),
            );
        }
    }
    for name in &on_disk {
        if !referenced.contains_key(name.as_str()) {
            report.push(
                Diagnostic::warning(codes::ORPHAN_IMAGE, format!("orphan image \"{name}\" is referenced by no recipe"))
                    .in_file(images_dir.join(name).display().to_string()),
            );
        }
    }
    report
}
