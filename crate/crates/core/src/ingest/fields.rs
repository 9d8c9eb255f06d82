//! Cell-level parsers for the working table.

use std::fmt;
use std::sync::LazyLock;

use chrono::NaiveDate;
use regex::Regex;

use crate::model::Acquisition;
use crate::text::non_absent;

/// Why a single cell could not be interpreted. The caller attaches row and
/// column coordinates when turning this into a diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldIssue {
    pub message: String,
}

impl FieldIssue {
    fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

impl fmt::Display for FieldIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Splits a `;`-separated cell, trimming items and dropping empty ones.
pub fn split_multivalue(cell: &str) -> Vec<String> {
    cell.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    /// Strictly positive and finite.
    pub value: f64,
    pub unit: Option<String>,
}

/// Parses `"<number> <unit>"` or `"<number><unit>"`; `,` and `.` are both
/// decimal separators. Empty, `n/s` and `-` cells are absent.
pub fn parse_quantity(raw: &str) -> Result<Option<Quantity>, FieldIssue> {
    let Some(text) = non_absent(raw) else {
        return Ok(None);
    };
    let number_len = text
        .char_indices()
        .find(|&(_, c)| !(c.is_ascii_digit() || c == ',' || c == '.'))
        .map_or(text.len(), |(i, _)| i);
    let (number, rest) = text.split_at(number_len);
    let unparseable = || FieldIssue::new(format!("unparseable quantity {text:?}"));

    let normalized = number.replace(',', ".");
    let mut parts = normalized.split('.');
    let integer = parts.next().unwrap_or_default();
    let fraction = parts.next();
    let well_formed = !integer.is_empty()
        && parts.next().is_none()
        && fraction.is_none_or(|f| !f.is_empty());
    if !well_formed {
        return Err(unparseable());
    }
    let value: f64 = normalized.parse().map_err(|_| unparseable())?;
    if !value.is_finite() || value <= 0.0 {
        return Err(FieldIssue::new(format!(
            "quantity must be a positive number, got {text:?}"
        )));
    }
    let unit = Some(rest.trim()).filter(|u| !u.is_empty()).map(str::to_owned);
    Ok(Some(Quantity { value, unit }))
}

/// Inverse of [`parse_quantity`] for emitted quantities.
pub fn format_quantity(quantity: &Quantity) -> String {
    match &quantity.unit {
        Some(unit) => format!("{} {}", quantity.value, unit),
        None => quantity.value.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngredientName {
    pub base: String,
    pub qualifier: Option<String>,
}

/// Splits a single trailing parenthetical off an ingredient name:
/// `"mushroom (dried)"` gives base `mushroom`, qualifier `dried`.
///
/// A parenthetical that is not at the end is left in the base. Unbalanced,
/// nested or repeated parentheses are rejected.
pub fn parse_ingredient_name(raw: &str) -> Result<IngredientName, FieldIssue> {
    let text = raw.trim();
    let opens: Vec<usize> = text.match_indices('(').map(|(i, _)| i).collect();
    let closes: Vec<usize> = text.match_indices(')').map(|(i, _)| i).collect();
    match (opens.as_slice(), closes.as_slice()) {
        ([], []) => Ok(IngredientName {
            base: text.to_owned(),
            qualifier: None,
        }),
        ([open], [close]) if open < close => {
            if *close + 1 != text.len() {
                return Ok(IngredientName {
                    base: text.to_owned(),
                    qualifier: None,
                });
            }
            let base = text[..*open].trim();
            if base.is_empty() {
                return Err(FieldIssue::new(format!(
                    "ingredient {text:?} has a qualifier but no name"
                )));
            }
            let qualifier = text[open + 1..*close].trim();
            Ok(IngredientName {
                base: base.to_owned(),
                qualifier: Some(qualifier)
                    .filter(|q| !q.is_empty())
                    .map(str::to_owned),
            })
        }
        (o, c) if o.len() == c.len() && o.len() > 1 => Err(FieldIssue::new(format!(
            "ingredient {text:?} has more than one parenthetical"
        ))),
        _ => Err(FieldIssue::new(format!(
            "unbalanced parentheses in ingredient {text:?}"
        ))),
    }
}

static ACQUISITION_FILENAME: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)^(?P<label>.+)_(?P<place>[^_]+)_(?P<day>\d{1,2})(?P<month>gen|feb|mar|apr|mag|giu|lug|ago|set|ott|nov|dic)(?P<year>\d{4})_(?P<page>[^_]+)\.(?P<ext>[A-Za-z0-9]+)$",
    )
    .expect("valid acquisition pattern")
});

const MONTHS: [&str; 12] = [
    "gen", "feb", "mar", "apr", "mag", "giu", "lug", "ago", "set", "ott", "nov", "dic",
];

/// Reads acquisition place and date from filenames shaped like
/// `Quaderno 1_Rimini_29ago2019_2.jpg` (Italian month abbreviations).
///
/// `Ok(None)` when the name does not follow the pattern; `Err` when it does
/// but the date does not exist.
pub fn parse_acquisition_from_filename(filename: &str) -> Result<Option<Acquisition>, FieldIssue> {
    let Some(caps) = ACQUISITION_FILENAME.captures(filename.trim()) else {
        return Ok(None);
    };
    let day: u32 = caps["day"].parse().expect("regex guarantees digits");
    let year: i32 = caps["year"].parse().expect("regex guarantees digits");
    let month_abbrev = caps["month"].to_lowercase();
    let month = MONTHS
        .iter()
        .position(|m| *m == month_abbrev)
        .expect("regex guarantees a known month") as u32
        + 1;
    match NaiveDate::from_ymd_opt(year, month, day) {
        Some(date) => Ok(Some(Acquisition {
            place: caps["place"].to_owned(),
            date,
        })),
        None => Err(FieldIssue::new(format!(
            "image {filename:?} encodes a non-existent date ({day} {month_abbrev} {year})"
        ))),
    }
}

/// Four-digit year, or absent.
pub fn parse_year(cell: &str) -> Result<Option<i32>, FieldIssue> {
    let Some(text) = non_absent(cell) else {
        return Ok(None);
    };
    if text.len() == 4 && text.bytes().all(|b| b.is_ascii_digit()) {
        Ok(Some(text.parse().expect("four ascii digits")))
    } else {
        Err(FieldIssue::new(format!("year {text:?} is not a 4-digit year")))
    }
}

/// Leading positive integer of a serves cell (`"10"`, `"10 persone"`).
pub fn parse_serves(cell: &str) -> Result<Option<u32>, FieldIssue> {
    let Some(text) = non_absent(cell) else {
        return Ok(None);
    };
    let digits: String = text.chars().take_while(char::is_ascii_digit).collect();
    match digits.parse::<u32>() {
        Ok(n) if n > 0 => Ok(Some(n)),
        _ => Err(FieldIssue::new(format!(
            "serves {text:?} does not start with a positive integer"
        ))),
    }
}
