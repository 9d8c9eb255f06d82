use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::emit::DatasetOptions;
use crate::ingest::ColumnMapping;
use crate::viz::{DEFAULT_EDGE_THRESHOLD, DEFAULT_MATRIX_CAP};

pub const DEFAULT_OUT_DIR: &str = "data";

#[derive(Debug, Parser)]
#[command(name = "cucina", version, about = "Compile a cookbook transcription table into static JSON site data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline and write the JSON artifacts.
    Build(Flags),
    /// Parse, resolve and validate; report diagnostics only.
    Validate(Flags),
    /// Print corpus counts without writing files.
    Stats(Flags),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Working table exported as TSV.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Directory holding the vocabulary files.
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    /// Directory of page images to cross-check.
    #[arg(long)]
    pub images: Option<PathBuf>,
    /// Output directory [default: data].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Treat unknown vocabulary terms as errors and refuse to emit on any error.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_name = "N")]
    pub edge_threshold: Option<usize>,
    #[arg(long, value_name = "N")]
    pub matrix_cap: Option<usize>,
    /// Diagnostics format.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// key=value configuration file; flags take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildConfig {
    pub input: PathBuf,
    pub vocab: PathBuf,
    pub images: Option<PathBuf>,
    pub out: PathBuf,
    pub mapping: ColumnMapping,
    pub strict: bool,
    pub edge_threshold: usize,
    pub matrix_cap: usize,
    pub format: OutputFormat,
}

impl BuildConfig {
    pub fn new(input: impl Into<PathBuf>, vocab: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            vocab: vocab.into(),
            images: None,
            out: PathBuf::from(DEFAULT_OUT_DIR),
            mapping: ColumnMapping::default(),
            strict: false,
            edge_threshold: DEFAULT_EDGE_THRESHOLD,
            matrix_cap: DEFAULT_MATRIX_CAP,
            format: OutputFormat::Text,
        }
    }

    pub fn dataset_options(&self) -> DatasetOptions {
        DatasetOptions {
            edge_threshold: self.edge_threshold,
            matrix_cap: self.matrix_cap,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("config line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("no {0} given (use --{0} or set it in the config file)")]
    Missing(&'static str),
    #[error("{0} must be at least 1")]
    BelowOne(&'static str),
}

/// Settings read from a config file; every field is optional.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    pub input: Option<PathBuf>,
    pub vocab: Option<PathBuf>,
    pub images: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub strict: Option<bool>,
    pub edge_threshold: Option<usize>,
    pub matrix_cap: Option<usize>,
    pub format: Option<OutputFormat>,
    /// `column.<field>` overrides, in file order.
    pub columns: Vec<(String, String)>,
}

/// Parses `key = value` lines. Blank lines and lines starting with `#` are
/// ignored. Relative paths are resolved against `base`.
pub fn parse_config_file(text: &str, base: &Path) -> Result<ConfigFile, ConfigError> {
    let mut config = ConfigFile::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| ConfigError::Line { line: line_no, message };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key = value, found \"{line}\"")))?;
        let (key, value) = (key.trim(), value.trim());
        let path = || base.join(value);
        let number = || {
            value
                .parse::<usize>()
                .map_err(|_| err(format!("{key} must be a non-negative integer, found \"{value}\"")))
        };
        match key {
            "input" => config.input = Some(path()),
            "vocab" => config.vocab = Some(path()),
            "images" => config.images = Some(path()),
            "out" => config.out = Some(path()),
            "strict" => {
                config.strict = Some(match value.to_ascii_lowercase().as_str() {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(err(format!("strict must be true or false, found \"{value}\""))),
                })
            }
            "edge_threshold" => config.edge_threshold = Some(number()?),
            "matrix_cap" => config.matrix_cap = Some(number()?),
            "format" => {
                config.format = Some(
                    OutputFormat::from_str(value, true)
                        .map_err(|_| err(format!("format must be text or json, found \"{value}\"")))?,
                )
            }
            _ => match key.strip_prefix("column.") {
                Some(field) if ColumnMapping::default().header(field).is_some() => {
                    config.columns.push((field.to_owned(), value.to_owned()))
                }
                Some(field) => return Err(err(format!("unknown column field \"{field}\""))),
                None => return Err(err(format!("unknown key \"{key}\""))),
            },
        }
    }
    Ok(config)
}

/// Merges flags over the config file (if any) over defaults.
pub fn resolve_config(flags: &Flags) -> Result<BuildConfig, ConfigError> {
    let file = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
                path: path.clone(),
                message: e.to_string(),
            })?;
            parse_config_file(&text, path.parent().unwrap_or(Path::new("")))?
        }
        None => ConfigFile::default(),
    };
    let input = flags.input.clone().or(file.input).ok_or(ConfigError::Missing("input"))?;
    let vocab = flags.vocab.clone().or(file.vocab).ok_or(ConfigError::Missing("vocab"))?;
    let mut config = BuildConfig::new(input, vocab);
    config.images = flags.images.clone().or(file.images);
    if let Some(out) = flags.out.clone().or(file.out) {
        config.out = out;
    }
    for (field, header) in file.columns {
        config.mapping.set(&field, header);
    }
    config.strict = flags.strict || file.strict.unwrap_or(false);
    config.edge_threshold = flags.edge_threshold.or(file.edge_threshold).unwrap_or(DEFAULT_EDGE_THRESHOLD);
    config.matrix_cap = flags.matrix_cap.or(file.matrix_cap).unwrap_or(DEFAULT_MATRIX_CAP);
    config.format = flags.format.or(file.format).unwrap_or_default();
    if config.edge_threshold < 1 {
        return Err(ConfigError::BelowOne("edge_threshold"));
    }
    if config.matrix_cap < 1 {
        return Err(ConfigError::BelowOne("matrix_cap"));
    }
    Ok(config)
}
