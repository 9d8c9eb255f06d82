//! Grouping annotation rows into recipes and cookbooks.

use std::collections::{HashMap, HashSet};

use crate::diagnostics::{codes, Diagnostic, DiagnosticsReport};
use crate::ingest::fields::{
    parse_acquisition_from_filename, parse_ingredient_name, parse_quantity, parse_serves,
};
use crate::model::{AnnotationRow, Cookbook, IngredientUse, Recipe};
use crate::text::slugify;

/// Fills `slot` with `value` if empty; reports a conflicting non-empty value
/// and keeps the first.
fn merge_scalar<T: PartialEq + std::fmt::Debug>(
    slot: &mut Option<T>,
    value: Option<T>,
    row: usize,
    column: &str,
    scope: &str,
    diagnostics: &mut DiagnosticsReport,
) {
    match (slot.as_ref(), value) {
        (_, None) => {}
        (None, Some(v)) => *slot = Some(v),
        (Some(existing), Some(v)) if *existing != v => diagnostics.push(
            Diagnostic::warning(
                codes::INCONSISTENT_GROUP,
                format!("inconsistent group: {scope} has {column} {existing:?}, row says {v:?}; keeping the first"),
            )
            .at_row(row)
            .at_column(column),
        ),
        _ => {}
    }
}

struct RecipeBuilder {
    recipe: Recipe,
    media: Vec<(String, String)>,
}

struct CookbookBuilder {
    cookbook: Cookbook,
    recipes: Vec<RecipeBuilder>,
    recipe_index: HashMap<(Option<String>, String), usize>,
}

/// Groups rows into cookbooks (keyed by notebook title) and recipes (keyed by
/// notebook, chapter and recipe title), preserving first-appearance order.
///
/// Cookbook and recipe scalars take the first non-empty value; later
/// conflicting values are reported. Ids are `<cookbook-slug>/<recipe-slug>`,
/// with `-2`, `-3`, ... appended to recipe slugs that collide within a
/// cookbook.
pub fn group_recipes(rows: &[AnnotationRow]) -> (Vec<Cookbook>, DiagnosticsReport) {
    let mut diagnostics = DiagnosticsReport::new();
    let mut builders: Vec<CookbookBuilder> = Vec::new();
    let mut cookbook_index: HashMap<&str, usize> = HashMap::new();
    let mut seen_images: HashSet<&str> = HashSet::new();

    for row in rows {
        let line = row.source_row;
        let ci = *cookbook_index
            .entry(row.notebook_title.as_str())
            .or_insert_with(|| {
                builders.push(CookbookBuilder {
                    cookbook: Cookbook {
                        title: row.notebook_title.clone(),
                        first_row: Some(line),
                        ..Cookbook::default()
                    },
                    recipes: Vec::new(),
                    recipe_index: HashMap::new(),
                });
                builders.len() - 1
            });
        let builder = &mut builders[ci];
        let scope = format!("notebook {:?}", row.notebook_title);
        {
            let c = &mut builder.cookbook;
            let d = &mut diagnostics;
            merge_scalar(&mut c.timespan.year_from, row.year_from, line, "year_from", &scope, d);
            merge_scalar(&mut c.timespan.year_to, row.year_to, line, "year_to", &scope, d);
            merge_scalar(&mut c.timespan.qualifier, row.time_qualifier.clone(), line, "time_qualifier", &scope, d);
            merge_scalar(&mut c.place, row.place.clone(), line, "place", &scope, d);
            merge_scalar(&mut c.region, row.region.clone(), line, "region", &scope, d);
            merge_scalar(&mut c.country, row.country.clone(), line, "country", &scope, d);
            merge_scalar(&mut c.author, row.author.clone(), line, "author", &scope, d);
        }

        for image in &row.image_names {
            if !seen_images.insert(image.as_str()) {
                continue;
            }
            match parse_acquisition_from_filename(image) {
                Ok(Some(acq)) => {
                    if builder.cookbook.acquisition.is_none() {
                        builder.cookbook.acquisition = Some(acq);
                    }
                }
                Ok(None) => {}
                Err(issue) => diagnostics.push(
                    Diagnostic::warning(codes::INVALID_ACQUISITION_DATE, issue.message)
                        .at_row(line)
                        .at_column("images"),
                ),
            }
        }

        let key = (row.chapter_title.clone(), row.recipe_title.clone());
        let ri = match builder.recipe_index.get(&key) {
            Some(&ri) => ri,
            None => {
                builder.recipes.push(RecipeBuilder {
                    recipe: Recipe {
                        title: row.recipe_title.clone(),
                        chapter: row.chapter_title.clone(),
                        ..Recipe::default()
                    },
                    media: Vec::new(),
                });
                let ri = builder.recipes.len() - 1;
                builder.recipe_index.insert(key, ri);
                ri
            }
        };
        add_row_to_recipe(&mut builder.recipes[ri], row, &mut diagnostics);
    }

    let cookbooks: Vec<Cookbook> = builders.into_iter().map(finish_cookbook).collect();
    let mut by_id: HashMap<&str, &Cookbook> = HashMap::new();
    for cookbook in &cookbooks {
        if let Some(first) = by_id.insert(&cookbook.id, cookbook) {
            let mut d = Diagnostic::error(
                codes::DUPLICATE_COOKBOOK_ID,
                format!(
                    "notebooks {:?} and {:?} both map to the id {:?}",
                    first.title, cookbook.title, cookbook.id
                ),
            )
            .at_column("notebook");
            d.row = cookbook.first_row;
            diagnostics.push(d);
        }
    }
    (cookbooks, diagnostics)
}

fn add_row_to_recipe(builder: &mut RecipeBuilder, row: &AnnotationRow, diagnostics: &mut DiagnosticsReport) {
    let line = row.source_row;
    let recipe = &mut builder.recipe;
    recipe.source_rows.push(line);
    let scope = format!("recipe {:?}", row.recipe_title);

    merge_scalar(&mut recipe.course_type, row.course_type.clone(), line, "course", &scope, diagnostics);
    merge_scalar(&mut recipe.scope, row.scope.clone(), line, "scope", &scope, diagnostics);
    merge_scalar(&mut recipe.prep_time, row.prep_time.clone(), line, "prep_time", &scope, diagnostics);
    merge_scalar(&mut recipe.cook_time, row.cook_time.clone(), line, "cook_time", &scope, diagnostics);
    merge_scalar(&mut recipe.temperature, row.temperature.clone(), line, "temperature", &scope, diagnostics);
    let serves = match row.serves.as_deref().map(parse_serves) {
        Some(Ok(s)) => s,
        Some(Err(issue)) => {
            diagnostics.push(
                Diagnostic::warning(codes::UNPARSEABLE_SERVES, issue.message)
                    .at_row(line)
                    .at_column("serves"),
            );
            None
        }
        None => None,
    };
    merge_scalar(&mut recipe.serves, serves, line, "serves", &scope, diagnostics);

    if row.image_names.len() == row.page_numbers.len() {
        for pair in row.image_names.iter().cloned().zip(row.page_numbers.iter().cloned()) {
            if !builder.media.contains(&pair) {
                builder.media.push(pair);
            }
        }
    } else {
        recipe.media_mismatch_rows.push(line);
    }

    for procedure in &row.procedures {
        if !recipe.procedures.contains(procedure) {
            recipe.procedures.push(procedure.clone());
        }
    }

    if let Some(raw) = &row.ingredient {
        recipe.ingredients.push(ingredient_use(raw, row, diagnostics));
    }
}

fn ingredient_use(raw: &str, row: &AnnotationRow, diagnostics: &mut DiagnosticsReport) -> IngredientUse {
    let line = row.source_row;
    let (base, qualifier) = match parse_ingredient_name(raw) {
        Ok(name) => (name.base, name.qualifier),
        Err(issue) => {
            diagnostics.push(
                Diagnostic::warning(codes::MALFORMED_INGREDIENT, issue.message)
                    .at_row(line)
                    .at_column("ingredient"),
            );
            (raw.trim().to_owned(), None)
        }
    };
    let quantity = match row.quantity.as_deref().map(parse_quantity) {
        Some(Ok(q)) => q,
        Some(Err(issue)) => {
            diagnostics.push(
                Diagnostic::warning(codes::UNPARSEABLE_QUANTITY, issue.message)
                    .at_row(line)
                    .at_column("quantity"),
            );
            None
        }
        None => None,
    };
    let (quantity_value, inline_unit) = match quantity {
        Some(q) => (Some(q.value), q.unit),
        None => (None, None),
    };
    let quantity_unit = match (row.unit.clone(), inline_unit) {
        (Some(column), Some(inline)) => {
            if column.to_lowercase() != inline.to_lowercase() {
                diagnostics.push(
                    Diagnostic::warning(
                        codes::INCONSISTENT_GROUP,
                        format!("inconsistent group: quantity carries unit {inline:?} but unit column says {column:?}; keeping the unit column"),
                    )
                    .at_row(line)
                    .at_column("unit"),
                );
            }
            Some(column)
        }
        (column, inline) => column.or(inline),
    };
    IngredientUse {
        raw_name: raw.trim().to_owned(),
        canonical_name: base,
        qualifier,
        variant_name: None,
        quantity_value,
        quantity_unit,
        source_row: line,
    }
}

fn finish_cookbook(builder: CookbookBuilder) -> Cookbook {
    let mut cookbook = builder.cookbook;
    cookbook.id = slugify(&cookbook.title);
    let mut used: HashSet<String> = HashSet::new();
    for rb in builder.recipes {
        let mut recipe = rb.recipe;
        let base = slugify(&recipe.title);
        let mut slug = base.clone();
        let mut n = 2;
        while !used.insert(slug.clone()) {
            slug = format!("{base}-{n}");
            n += 1;
        }
        recipe.id = format!("{}/{}", cookbook.id, slug);
        recipe.cookbook_ref = cookbook.id.clone();
        let (images, pages) = rb.media.into_iter().unzip();
        recipe.images = images;
        recipe.pages = pages;
        cookbook.recipes.push(recipe);
    }
    cookbook
}
