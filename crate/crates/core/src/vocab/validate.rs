use crate::diagnostics::{codes, Diagnostic, DiagnosticsReport, Severity};
use crate::ingest::parse_ingredient_name;
use crate::model::Cookbook;
use crate::vocab::set::{Facet, Resolution, VocabularySet};

/// Rewrites raw terms in place to their canonical spellings. Ingredients
/// reached through a variant keep the variant in `variant_name`. Unknown
/// terms are left as transcribed.
pub fn resolve_corpus(cookbooks: &mut [Cookbook], vocab: &VocabularySet) {
    let canonical = |facet: Facet, raw: &mut String| {
        if let Resolution::Canonical(t) | Resolution::Variant(t) = vocab.resolve(facet, raw) {
            *raw = t;
        }
    };
    for cookbook in cookbooks {
        if let Some(place) = cookbook.place.as_mut() {
            canonical(Facet::City, place);
        }
        for recipe in &mut cookbook.recipes {
            if let Some(course) = recipe.course_type.as_mut() {
                canonical(Facet::Course, course);
            }
            if let Some(scope) = recipe.scope.as_mut() {
                canonical(Facet::Scope, scope);
            }
            for procedure in &mut recipe.procedures {
                canonical(Facet::Procedure, procedure);
            }
            // Distinct raw spellings may collapse onto one canonical term.
            let mut seen = Vec::with_capacity(recipe.procedures.len());
            recipe.procedures.retain(|p| {
                if seen.contains(p) {
                    false
                } else {
                    seen.push(p.clone());
                    true
                }
            });
            for use_ in &mut recipe.ingredients {
                match vocab.resolve(Facet::Ingredient, &use_.canonical_name) {
                    Resolution::Canonical(t) => use_.canonical_name = t,
                    Resolution::Variant(t) => {
                        use_.variant_name = Some(std::mem::replace(&mut use_.canonical_name, t));
                    }
                    Resolution::Unknown(_) => {}
                }
                if let Some(unit) = use_.quantity_unit.as_mut() {
                    canonical(Facet::Unit, unit);
                }
            }
        }
    }
}

/// Editorial checks over a grouped corpus.
///
/// Unresolved ingredient, course, procedure, unit, scope and city terms are
/// warnings, or errors when `strict`. Image/page count mismatches and
/// inverted timespans are always errors.
pub fn validate_corpus(cookbooks: &[Cookbook], vocab: &VocabularySet, strict: bool) -> DiagnosticsReport {
    let unknown_severity = if strict { Severity::Error } else { Severity::Warning };
    let mut report = DiagnosticsReport::new();
    let mut unknown = |facet: Facet, code: &str, term: &str, row: Option<usize>, column: &str| {
        if vocab.resolve(facet, term).is_known() {
            return;
        }
        let mut d = Diagnostic::new(unknown_severity, code, format!("unknown {facet} {term:?}"))
            .at_column(column);
        d.row = row;
        report.push(d);
    };

    for cookbook in cookbooks {
        if let Some(place) = &cookbook.place {
            unknown(Facet::City, codes::UNKNOWN_CITY, place, cookbook.first_row, "place");
        }
        for recipe in &cookbook.recipes {
            let row = recipe.first_row();
            if let Some(course) = &recipe.course_type {
                unknown(Facet::Course, codes::UNKNOWN_COURSE, course, row, "course");
            }
            if let Some(scope) = &recipe.scope {
                unknown(Facet::Scope, codes::UNKNOWN_SCOPE, scope, row, "scope");
            }
            for procedure in &recipe.procedures {
                unknown(Facet::Procedure, codes::UNKNOWN_PROCEDURE, procedure, row, "procedures");
            }
            for use_ in &recipe.ingredients {
                let base = parse_ingredient_name(&use_.raw_name)
                    .map(|n| n.base)
                    .unwrap_or_else(|_| use_.raw_name.clone());
                let row = Some(use_.source_row);
                unknown(Facet::Ingredient, codes::UNKNOWN_INGREDIENT, &base, row, "ingredient");
                if let Some(unit) = &use_.quantity_unit {
                    unknown(Facet::Unit, codes::UNKNOWN_UNIT, unit, row, "unit");
                }
            }
        }
    }

    for cookbook in cookbooks {
        for recipe in &cookbook.recipes {
            for &row in &recipe.media_mismatch_rows {
                report.push(
                    Diagnostic::error(
                        codes::PAGE_IMAGE_MISMATCH,
                        format!(
                            "recipe {:?}: image and page lists differ in length",
                            recipe.title
                        ),
                    )
                    .at_row(row)
                    .at_column("images"),
                );
            }
        }
        if let (Some(from), Some(to)) = (cookbook.timespan.year_from, cookbook.timespan.year_to) {
            if from > to {
                let mut d = Diagnostic::error(
                    codes::YEAR_ORDER,
                    format!("notebook {:?}: year_from {from} is after year_to {to}", cookbook.title),
                )
                .at_column("year_from");
                d.row = cookbook.first_row;
                report.push(d);
            }
        }
    }
    report
}
