//! Corpus model: annotation rows grouped into recipes and cookbooks.

use chrono::NaiveDate;

/// One spreadsheet row: one ingredient-level annotation of one recipe.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnnotationRow {
    pub notebook_title: String,
    pub year_from: Option<i32>,
    pub year_to: Option<i32>,
    pub time_qualifier: Option<String>,
    pub place: Option<String>,
    pub region: Option<String>,
    pub country: Option<String>,
    pub author: Option<String>,
    pub image_names: Vec<String>,
    /// Parallel to `image_names`.
    pub page_numbers: Vec<String>,
    pub chapter_title: Option<String>,
    pub recipe_title: String,
    pub ingredient: Option<String>,
    pub quantity: Option<String>,
    pub unit: Option<String>,
    pub course_type: Option<String>,
    pub scope: Option<String>,
    pub procedures: Vec<String>,
    pub serves: Option<String>,
    pub prep_time: Option<String>,
    pub cook_time: Option<String>,
    pub temperature: Option<String>,
    /// 1-based line number in the source file; the header is line 1.
    pub source_row: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IngredientUse {
    /// Cell text as transcribed, qualifier included.
    pub raw_name: String,
    pub canonical_name: String,
    pub qualifier: Option<String>,
    /// Historical or dialect spelling the canonical term was reached through.
    pub variant_name: Option<String>,
    pub quantity_value: Option<f64>,
    pub quantity_unit: Option<String>,
    pub source_row: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Recipe {
    /// `<cookbook-slug>/<recipe-slug>`
    pub id: String,
    pub title: String,
    pub chapter: Option<String>,
    pub cookbook_ref: String,
    pub pages: Vec<String>,
    pub images: Vec<String>,
    pub ingredients: Vec<IngredientUse>,
    pub course_type: Option<String>,
    pub scope: Option<String>,
    pub procedures: Vec<String>,
    pub serves: Option<u32>,
    pub prep_time: Option<String>,
    pub cook_time: Option<String>,
    pub temperature: Option<String>,
    /// Rows grouped into this recipe, in source order.
    pub source_rows: Vec<usize>,
    /// Rows whose image and page lists had different lengths.
    pub media_mismatch_rows: Vec<usize>,
}

impl Recipe {
    pub fn first_row(&self) -> Option<usize> {
        self.source_rows.first().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Timespan {
    pub year_from: Option<i32>,
    pub year_to: Option<i32>,
    pub qualifier: Option<String>,
}

/// Where and when a notebook was found, recovered from image filenames.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Acquisition {
    pub place: String,
    pub date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cookbook {
    pub id: String,
    pub title: String,
    pub timespan: Timespan,
    pub place: Option<String>,
    pub region: Option<String>,
    pub country: Option<String>,
    pub author: Option<String>,
    pub acquisition: Option<Acquisition>,
    pub recipes: Vec<Recipe>,
    pub first_row: Option<usize>,
}

/// Iterates every recipe of every cookbook, paired with its cookbook.
pub fn recipes(cookbooks: &[Cookbook]) -> impl Iterator<Item = (&Cookbook, &Recipe)> {
    cookbooks
        .iter()
        .flat_map(|c| c.recipes.iter().map(move |r| (c, r)))
}

pub fn recipe_count(cookbooks: &[Cookbook]) -> usize {
    cookbooks.iter().map(|c| c.recipes.len()).sum()
}
