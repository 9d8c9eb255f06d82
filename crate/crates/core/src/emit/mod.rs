//! JSON artifact emission.

mod canonical;
mod images;
mod site;

use std::path::PathBuf;

pub use canonical::{canonical_json, Decimal};
pub use images::check_image_manifest;
pub use site::{
    cookbook_path, emit_cookbook_file, emit_site_data, render_site, DatasetOptions, Manifest,
    SiteDataset, COOKBOOKS_DIR, GENERAL_FILE, TOP_LEVEL_FILES,
};

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("serialization failed: {0}")]
    Serialize(#[source] serde_json::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cookbooks \"{first}\" and \"{second}\" share the id \"{slug}\"")]
    SlugCollision {
        slug: String,
        first: String,
        second: String,
    },
}
