//! Command-line commands. Each writes to caller-supplied streams and returns
//! the process exit status.

mod config;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use config::{
    parse_config_file, resolve_config, BuildConfig, Cli, Command, ConfigError, ConfigFile, Flags,
    OutputFormat, DEFAULT_OUT_DIR,
};

use crate::diagnostics::DiagnosticsReport;
use crate::emit::{canonical_json, emit_site_data};
use crate::pipeline::{analyze, Analysis};
use crate::vocab::load_vocabularies;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_FAILURE: u8 = 2;

type CommandFn = fn(&BuildConfig, &mut dyn Write, &mut dyn Write) -> u8;

fn load(config: &BuildConfig) -> Result<Analysis, String> {
    let table = std::fs::read(&config.input)
        .map_err(|e| format!("cannot read {}: {e}", config.input.display()))?;
    let (vocab, vocab_report) = load_vocabularies(&config.vocab).map_err(|e| e.to_string())?;
    let mut analysis = analyze(
        &table,
        &config.mapping,
        &vocab,
        vocab_report,
        config.strict,
        config.dataset_options(),
    )
    .map_err(|e| format!("{}: {e}", config.input.display()))?;
    if let Some(images) = &config.images {
        analysis.check_images(images);
    }
    Ok(analysis)
}

fn write_report(report: &DiagnosticsReport, w: &mut dyn Write) -> std::io::Result<()> {
    for d in report.entries() {
        writeln!(w, "{d}")?;
    }
    writeln!(w, "{}", report.summary())
}

fn fail(err: &mut dyn Write, message: &str) -> u8 {
    let _ = writeln!(err, "error: {message}");
    EXIT_FAILURE
}

/// Runs the full pipeline and writes the artifact set to `config.out`.
///
/// Diagnostics go to `err`, the manifest (one path per line, relative to the
/// output directory) to `out`.
pub fn cmd_build(config: &BuildConfig, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let analysis = match load(config) {
        Ok(a) => a,
        Err(message) => return fail(err, &message),
    };
    let _ = write_report(&analysis.report, err);
    if config.strict && analysis.report.has_errors() {
        let _ = writeln!(err, "build aborted: strict mode and {} error(s)", analysis.report.error_count());
        return EXIT_INVALID;
    }
    match emit_site_data(&analysis.dataset, &config.out) {
        Ok(manifest) => {
            for file in &manifest.files {
                let _ = writeln!(out, "{file}");
            }
            EXIT_OK
        }
        Err(e) => fail(err, &e.to_string()),
    }
}

/// Reports diagnostics without writing files; exit 0 iff there are no errors.
pub fn cmd_validate(config: &BuildConfig, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let analysis = match load(config) {
        Ok(a) => a,
        Err(message) => return fail(err, &message),
    };
    let written = match config.format {
        OutputFormat::Text => write_report(&analysis.report, out),
        OutputFormat::Json => match canonical_json(&analysis.report) {
            Ok(bytes) => out.write_all(&bytes),
            Err(e) => return fail(err, &e.to_string()),
        },
    };
    if let Err(e) = written {
        return fail(err, &e.to_string());
    }
    if analysis.report.has_errors() {
        EXIT_INVALID
    } else {
        EXIT_OK
    }
}

/// Prints corpus counts and facet bucket sizes.
pub fn cmd_stats(config: &BuildConfig, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let analysis = match load(config) {
        Ok(a) => a,
        Err(message) => return fail(err, &message),
    };
    let _ = write_report(&analysis.report, err);
    let d = &analysis.dataset;
    let mut lines = vec![
        format!("cookbooks: {}", d.overview.cookbook_count),
        format!("recipes: {}", d.overview.recipe_count),
        format!("ingredients: {}", d.overview.ingredient_count),
        format!("cities: {}", d.map.points.len()),
    ];
    for (gender, n) in &d.overview.gender {
        lines.push(format!("gender {gender}: {n}"));
    }
    for index in [&d.alphabet, &d.categories, &d.provenance, &d.ingredients] {
        for (bucket, n) in index.bucket_sizes() {
            lines.push(format!("{} {bucket}: {n}", index.facet));
        }
    }
    for line in lines {
        if let Err(e) = writeln!(out, "{line}") {
            return fail(err, &e.to_string());
        }
    }
    EXIT_OK
}

/// Parses `args` (including the program name) and dispatches.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_FAILURE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let (flags, command): (&Flags, CommandFn) = match &cli.command {
        Command::Build(f) => (f, cmd_build),
        Command::Validate(f) => (f, cmd_validate),
        Command::Stats(f) => (f, cmd_stats),
    };
    match resolve_config(flags) {
        Ok(config) => command(&config, out, err),
        Err(e) => fail(err, &e.to_string()),
    }
}
