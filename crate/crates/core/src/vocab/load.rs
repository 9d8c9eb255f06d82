//! Vocabulary directory loading.
//!
//! One TSV file per facet, each with a header row that is skipped. Columns
//! are positional:
//!
//! | file              | columns                                   |
//! |-------------------|-------------------------------------------|
//! | `ingredients.tsv` | canonical, variants (`;`-separated)       |
//! | `courses.tsv`     | term                                      |
//! | `geography.tsv`   | city, region, country, latitude, longitude|
//! | `procedures.tsv`  | term                                      |
//! | `units.tsv`       | unit, grams per unit                      |
//! | `scopes.tsv`      | term                                      |
//! | `authors.tsv`     | name, gender (`female`/`male`/`unknown`)  |

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::diagnostics::{codes, Diagnostic, DiagnosticsReport};
use crate::ingest::split_multivalue;
use crate::text::match_key;
use crate::vocab::set::{City, Gender, GeographyConflict, VocabularySet};
use crate::vocab::VocabError;

pub const INGREDIENTS_FILE: &str = "ingredients.tsv";
pub const COURSES_FILE: &str = "courses.tsv";
pub const GEOGRAPHY_FILE: &str = "geography.tsv";
pub const PROCEDURES_FILE: &str = "procedures.tsv";
pub const UNITS_FILE: &str = "units.tsv";
pub const SCOPES_FILE: &str = "scopes.tsv";
pub const AUTHORS_FILE: &str = "authors.tsv";

pub const VOCABULARY_FILES: [&str; 7] = [
    INGREDIENTS_FILE,
    COURSES_FILE,
    GEOGRAPHY_FILE,
    PROCEDURES_FILE,
    UNITS_FILE,
    SCOPES_FILE,
    AUTHORS_FILE,
];

/// Loads every facet file found in `dir`. Missing files leave their facet
/// empty and produce a warning; a missing directory is an error.
pub fn load_vocabularies(dir: &Path) -> Result<(VocabularySet, DiagnosticsReport), VocabError> {
    if !dir.is_dir() {
        return Err(VocabError::NotADirectory(dir.to_path_buf()));
    }
    let mut contents = Vec::new();
    for name in VOCABULARY_FILES {
        let path = dir.join(name);
        if !path.exists() {
            continue;
        }
        let bytes = fs::read(&path).map_err(|source| VocabError::Io {
            path: path.clone(),
            source,
        })?;
        let text = String::from_utf8(bytes).map_err(|_| VocabError::NotUtf8(path.clone()))?;
        contents.push((name, text));
    }
    Ok(parse_vocabulary_files(
        contents.iter().map(|(n, t)| (*n, t.as_str())),
    ))
}

/// Builds a vocabulary from `(file name, contents)` pairs. Unknown file
/// names are ignored.
pub fn parse_vocabulary_files<'a>(
    files: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> (VocabularySet, DiagnosticsReport) {
    let files: HashMap<&str, &str> = files.into_iter().collect();
    let mut vocab = VocabularySet::new();
    let mut diagnostics = DiagnosticsReport::new();

    for name in VOCABULARY_FILES {
        let Some(text) = files.get(name) else {
            diagnostics.push(
                Diagnostic::warning(
                    codes::MISSING_VOCABULARY,
                    format!("vocabulary file {name} not found; facet left empty"),
                )
                .in_file(name),
            );
            continue;
        };
        let lines = match read_lines(text) {
            Ok(lines) => lines,
            Err(message) => {
                diagnostics.push(
                    Diagnostic::error(codes::MALFORMED_VOCABULARY_LINE, message).in_file(name),
                );
                continue;
            }
        };
        let mut ctx = FileContext {
            file: name,
            diagnostics: &mut diagnostics,
        };
        match name {
            INGREDIENTS_FILE => load_ingredients(&lines, &mut vocab, &mut ctx),
            COURSES_FILE => load_terms(&lines, &mut ctx, |t| vocab.courses.insert(t)),
            PROCEDURES_FILE => load_terms(&lines, &mut ctx, |t| vocab.procedures.insert(t)),
            SCOPES_FILE => load_terms(&lines, &mut ctx, |t| vocab.scopes.insert(t)),
            UNITS_FILE => load_units(&lines, &mut vocab, &mut ctx),
            GEOGRAPHY_FILE => load_geography(&lines, &mut vocab, &mut ctx),
            AUTHORS_FILE => load_authors(&lines, &mut vocab, &mut ctx),
            _ => unreachable!("every vocabulary file has a loader"),
        }
    }
    (vocab, diagnostics)
}

struct Line {
    number: usize,
    cells: Vec<String>,
}

impl Line {
    fn cell(&self, i: usize) -> &str {
        self.cells.get(i).map_or("", |c| c.trim())
    }
}

/// Data lines (header dropped, blank lines skipped).
fn read_lines(text: &str) -> Result<Vec<Line>, String> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .flexible(true)
        .has_headers(true)
        .from_reader(text.as_bytes());
    let mut lines = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        if record.iter().all(|c| c.trim().is_empty()) {
            continue;
        }
        lines.push(Line {
            number: record.position().map_or(0, |p| p.line() as usize),
            cells: record.iter().map(str::to_owned).collect(),
        });
    }
    Ok(lines)
}

struct FileContext<'a> {
    file: &'static str,
    diagnostics: &'a mut DiagnosticsReport,
}

impl FileContext<'_> {
    fn error(&mut self, line: &Line, code: &str, message: String) {
        self.diagnostics.push(
            Diagnostic::error(code, message)
                .at_row(line.number)
                .in_file(self.file),
        );
    }

    fn warning(&mut self, line: &Line, code: &str, message: String) {
        self.diagnostics.push(
            Diagnostic::warning(code, message)
                .at_row(line.number)
                .in_file(self.file),
        );
    }

    fn duplicate(&mut self, line: &Line, term: &str, existing: &str) {
        self.warning(
            line,
            codes::DUPLICATE_TERM,
            format!("duplicate term {term:?} collapses into {existing:?}"),
        );
    }
}

fn load_terms(
    lines: &[Line],
    ctx: &mut FileContext<'_>,
    mut insert: impl FnMut(&str) -> Result<(), String>,
) {
    for line in lines {
        let term = line.cell(0);
        if term.is_empty() {
            ctx.error(line, codes::MALFORMED_VOCABULARY_LINE, "empty term".into());
            continue;
        }
        if let Err(existing) = insert(term) {
            ctx.duplicate(line, term, &existing);
        }
    }
}

fn load_ingredients(lines: &[Line], vocab: &mut VocabularySet, ctx: &mut FileContext<'_>) {
    // Canonical terms first so that variant checks see the whole term set.
    let mut accepted = Vec::new();
    for line in lines {
        let term = line.cell(0);
        let variants = split_multivalue(line.cell(1));
        if term.is_empty() {
            let message = if variants.is_empty() {
                "empty term".to_owned()
            } else {
                format!(
                    "variants {} reference no canonical ingredient",
                    variants.join("; ")
                )
            };
            ctx.error(line, codes::MALFORMED_VOCABULARY_LINE, message);
            continue;
        }
        let canonical = match vocab.ingredients.insert(term) {
            Ok(()) => term.to_owned(),
            Err(existing) => {
                ctx.duplicate(line, term, &existing);
                existing
            }
        };
        accepted.push((line, canonical, variants));
    }

    for (line, canonical, variants) in accepted {
        for variant in variants {
            let key = match_key(&variant);
            if key == match_key(&canonical) {
                continue;
            }
            if let Some(other) = vocab.ingredients.get(&variant) {
                ctx.error(
                    line,
                    codes::CONFLICTING_VARIANT,
                    format!("variant {variant:?} of {canonical:?} is itself the canonical ingredient {other:?}"),
                );
                continue;
            }
            match vocab.variants.get(&key) {
                Some(existing) if *existing == canonical => {}
                Some(existing) => ctx.error(
                    line,
                    codes::CONFLICTING_VARIANT,
                    format!("variant {variant:?} already maps to {existing:?}, not {canonical:?}"),
                ),
                None => {
                    vocab.variants.insert(key, canonical.clone());
                }
            }
        }
    }
}

fn parse_number(cell: &str) -> Result<Option<f64>, String> {
    if cell.is_empty() {
        return Ok(None);
    }
    match cell.replace(',', ".").parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(format!("{cell:?} is not a number")),
    }
}

fn load_units(lines: &[Line], vocab: &mut VocabularySet, ctx: &mut FileContext<'_>) {
    for line in lines {
        let unit = line.cell(0);
        if unit.is_empty() {
            ctx.error(line, codes::MALFORMED_VOCABULARY_LINE, "empty unit".into());
            continue;
        }
        let grams = match parse_number(line.cell(1)) {
            Ok(Some(g)) if g <= 0.0 => {
                ctx.error(
                    line,
                    codes::MALFORMED_VOCABULARY_LINE,
                    format!("grams per unit must be positive, got {g}"),
                );
                continue;
            }
            Ok(g) => g,
            Err(message) => {
                ctx.error(line, codes::MALFORMED_VOCABULARY_LINE, message);
                continue;
            }
        };
        match vocab.units.insert(unit) {
            Ok(()) => {
                if let Some(g) = grams {
                    vocab.grams_per_unit.insert(match_key(unit), g);
                }
            }
            Err(existing) => ctx.duplicate(line, unit, &existing),
        }
    }
}

fn load_geography(lines: &[Line], vocab: &mut VocabularySet, ctx: &mut FileContext<'_>) {
    for line in lines {
        let (name, region, country) = (line.cell(0), line.cell(1), line.cell(2));
        if name.is_empty() || region.is_empty() || country.is_empty() {
            ctx.error(
                line,
                codes::MALFORMED_VOCABULARY_LINE,
                "geography lines need city, region and country".into(),
            );
            continue;
        }
        let coords = match (parse_number(line.cell(3)), parse_number(line.cell(4))) {
            (Ok(None), Ok(None)) => None,
            (Ok(Some(lat)), Ok(Some(lon)))
                if (-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lon) =>
            {
                Some((lat, lon))
            }
            (Ok(Some(_)), Ok(Some(_))) => {
                ctx.error(
                    line,
                    codes::MALFORMED_VOCABULARY_LINE,
                    format!("coordinates of {name:?} out of range"),
                );
                continue;
            }
            (Err(message), _) | (_, Err(message)) => {
                ctx.error(line, codes::MALFORMED_VOCABULARY_LINE, message);
                continue;
            }
            _ => {
                ctx.error(
                    line,
                    codes::MALFORMED_VOCABULARY_LINE,
                    format!("{name:?} has only one of latitude/longitude"),
                );
                continue;
            }
        };
        let city = City {
            name: name.to_owned(),
            region: region.to_owned(),
            country: country.to_owned(),
            latitude: coords.map(|c| c.0),
            longitude: coords.map(|c| c.1),
        };
        match vocab.geography.insert(city) {
            Ok(()) => {}
            Err(GeographyConflict::Duplicate) => ctx.duplicate(line, name, name),
            Err(GeographyConflict::CityRegion { existing_region }) => ctx.error(
                line,
                codes::GEOGRAPHY_CONFLICT,
                format!("city {name:?} already belongs to region {existing_region:?}"),
            ),
            Err(GeographyConflict::RegionCountry { existing_country }) => ctx.error(
                line,
                codes::GEOGRAPHY_CONFLICT,
                format!("region {region:?} already belongs to country {existing_country:?}"),
            ),
        }
    }
}

fn load_authors(lines: &[Line], vocab: &mut VocabularySet, ctx: &mut FileContext<'_>) {
    for line in lines {
        let name = line.cell(0);
        if name.is_empty() {
            ctx.error(line, codes::MALFORMED_VOCABULARY_LINE, "empty author name".into());
            continue;
        }
        let gender = match line.cell(1) {
            "" => Gender::Unknown,
            g => match Gender::parse(g) {
                Some(g) => g,
                None => {
                    ctx.error(
                        line,
                        codes::MALFORMED_VOCABULARY_LINE,
                        format!("gender {g:?} is not one of female, male, unknown"),
                    );
                    continue;
                }
            },
        };
        let key = match_key(name);
        if let Some((existing, _)) = vocab.authors.get(&key) {
            let existing = existing.clone();
            ctx.duplicate(line, name, &existing);
            continue;
        }
        vocab.authors.insert(key, (name.to_owned(), gender));
    }
}
