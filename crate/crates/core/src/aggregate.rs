//! Corpus statistics and the facet indexes behind search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{recipes, Cookbook, Recipe};
use crate::text::{compare_titles, initial_bucket};
use crate::vocab::VocabularySet;

pub const UNCATEGORISED: &str = "uncategorised";
pub const UNKNOWN_PROVENANCE: &str = "unknown";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OverviewStats {
    pub cookbook_count: usize,
    pub recipe_count: usize,
    /// Distinct canonical ingredients used by at least one recipe.
    pub ingredient_count: usize,
    /// Gender name → number of recipes; zero tallies are omitted.
    pub gender: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FacetKind {
    Letter,
    Category,
    Ingredient,
    Provenance,
}

impl FacetKind {
    pub fn name(self) -> &'static str {
        match self {
            FacetKind::Letter => "letter",
            FacetKind::Category => "category",
            FacetKind::Ingredient => "ingredient",
            FacetKind::Provenance => "provenance",
        }
    }

    /// Partition facets put every recipe in exactly one bucket.
    pub fn is_partition(self) -> bool {
        !matches!(self, FacetKind::Ingredient)
    }
}

impl fmt::Display for FacetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bucket key → recipe ids. Within a bucket ids follow [`display_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetIndex {
    pub facet: FacetKind,
    pub buckets: BTreeMap<String, Vec<String>>,
}

impl FacetIndex {
    fn build<'a, F, I>(facet: FacetKind, cookbooks: &'a [Cookbook], keys: F) -> Self
    where
        F: Fn(&'a Cookbook, &'a Recipe) -> I,
        I: IntoIterator<Item = String>,
    {
        let mut buckets: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (cookbook, recipe) in display_order(cookbooks) {
            let distinct: BTreeSet<String> = keys(cookbook, recipe).into_iter().collect();
            for key in distinct {
                buckets.entry(key).or_default().push(recipe.id.clone());
            }
        }
        Self { facet, buckets }
    }

    pub fn bucket_sizes(&self) -> BTreeMap<&str, usize> {
        self.buckets
            .iter()
            .map(|(k, v)| (k.as_str(), v.len()))
            .collect()
    }

    pub fn total_entries(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }
}

/// Every recipe ordered by title, then author, then id; titles and authors
/// compare case-insensitively after accent folding.
pub fn display_order(cookbooks: &[Cookbook]) -> Vec<(&Cookbook, &Recipe)> {
    let mut all: Vec<_> = recipes(cookbooks).collect();
    all.sort_by(|(ca, ra), (cb, rb)| {
        compare_titles(&ra.title, &rb.title)
            .then_with(|| {
                compare_titles(
                    ca.author.as_deref().unwrap_or_default(),
                    cb.author.as_deref().unwrap_or_default(),
                )
            })
            .then_with(|| ra.id.cmp(&rb.id))
    });
    all
}

pub fn index_by_letter(cookbooks: &[Cookbook]) -> FacetIndex {
    FacetIndex::build(FacetKind::Letter, cookbooks, |_, r| {
        Some(initial_bucket(&r.title))
    })
}

pub fn index_by_category(cookbooks: &[Cookbook]) -> FacetIndex {
    FacetIndex::build(FacetKind::Category, cookbooks, |_, r| {
        Some(r.course_type.clone().unwrap_or_else(|| UNCATEGORISED.to_owned()))
    })
}

pub fn index_by_ingredient(cookbooks: &[Cookbook]) -> FacetIndex {
    FacetIndex::build(FacetKind::Ingredient, cookbooks, |_, r| {
        r.ingredients
            .iter()
            .map(|i| i.canonical_name.clone())
            .collect::<Vec<_>>()
    })
}

pub fn index_by_provenance(cookbooks: &[Cookbook]) -> FacetIndex {
    FacetIndex::build(FacetKind::Provenance, cookbooks, |c, _| {
        Some(c.place.clone().unwrap_or_else(|| UNKNOWN_PROVENANCE.to_owned()))
    })
}

/// Recipes per author gender, attributed through the cookbook author.
pub fn gender_breakdown(cookbooks: &[Cookbook], vocab: &VocabularySet) -> BTreeMap<String, usize> {
    let mut tallies = BTreeMap::new();
    for cookbook in cookbooks {
        if cookbook.recipes.is_empty() {
            continue;
        }
        let gender = vocab.gender_of(cookbook.author.as_deref());
        *tallies.entry(gender.name().to_owned()).or_insert(0) += cookbook.recipes.len();
    }
    tallies
}

pub fn overview_stats(cookbooks: &[Cookbook], vocab: &VocabularySet) -> OverviewStats {
    let ingredients: BTreeSet<&str> = recipes(cookbooks)
        .flat_map(|(_, r)| r.ingredients.iter().map(|i| i.canonical_name.as_str()))
        .collect();
    OverviewStats {
        cookbook_count: cookbooks.len(),
        recipe_count: crate::model::recipe_count(cookbooks),
        ingredient_count: ingredients.len(),
        gender: gender_breakdown(cookbooks, vocab),
    }
}
