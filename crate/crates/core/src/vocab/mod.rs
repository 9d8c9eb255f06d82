//! Controlled vocabularies, term resolution and corpus validation.

mod load;
mod set;
mod validate;

use std::path::PathBuf;

pub use load::{load_vocabularies, parse_vocabulary_files, VOCABULARY_FILES};
pub use set::{
    resolve_term, City, Facet, Gender, Geography, GeographyConflict, Resolution, TermSet,
    VocabularySet,
};
pub use validate::{resolve_corpus, validate_corpus};

#[derive(Debug, thiserror::Error)]
pub enum VocabError {
    #[error("vocabulary directory {0} does not exist")]
    NotADirectory(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("vocabulary file {0} is not valid UTF-8")]
    NotUtf8(PathBuf),
}
