use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::aggregate::{
    display_order, index_by_category, index_by_ingredient, index_by_letter, index_by_provenance,
    overview_stats, FacetIndex, OverviewStats,
};
use crate::diagnostics::DiagnosticsReport;
use crate::emit::canonical::{canonical_json, Decimal};
use crate::emit::EmitError;
use crate::model::{Cookbook, Recipe};
use crate::viz::{
    build_cooccurrence_matrix, build_map_dataset, build_network, build_piechart, build_units_profile,
    cap_matrix, CooccurrenceMatrix, IngredientNetwork, MapDataset, PieDataset, UnitsProfile, VizError,
};
use crate::vocab::VocabularySet;

pub const GENERAL_FILE: &str = "general.json";
pub const COOKBOOKS_DIR: &str = "cookbooks";

/// Top-level artifact files, keyed by their registry name in `general.json`.
pub const TOP_LEVEL_FILES: [(&str, &str); 10] = [
    ("general", GENERAL_FILE),
    ("alphabet", "alphabet.json"),
    ("categories", "categories.json"),
    ("ingredients", "ingredients.json"),
    ("provenance", "provenance.json"),
    ("map", "map.json"),
    ("matrix", "matrix.json"),
    ("network", "network.json"),
    ("piechart", "piechart.json"),
    ("units", "units.json"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetOptions {
    pub edge_threshold: usize,
    pub matrix_cap: usize,
}

impl Default for DatasetOptions {
    fn default() -> Self {
        Self {
            edge_threshold: crate::viz::DEFAULT_EDGE_THRESHOLD,
            matrix_cap: crate::viz::DEFAULT_MATRIX_CAP,
        }
    }
}

/// Everything the site needs, computed from a resolved corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteDataset {
    pub overview: OverviewStats,
    pub alphabet: FacetIndex,
    pub categories: FacetIndex,
    pub ingredients: FacetIndex,
    pub provenance: FacetIndex,
    pub map: MapDataset,
    pub matrix: CooccurrenceMatrix,
    pub network: IngredientNetwork,
    pub piechart: PieDataset,
    pub units: UnitsProfile,
    pub unit_grams: BTreeMap<String, f64>,
    pub gender_by_cookbook: BTreeMap<String, String>,
    pub cookbooks: Vec<Cookbook>,
}

impl SiteDataset {
    /// Runs every aggregation and visualization builder. Map and matrix-cap
    /// warnings are returned alongside.
    pub fn build(
        cookbooks: Vec<Cookbook>,
        vocab: &VocabularySet,
        options: DatasetOptions,
    ) -> Result<(Self, DiagnosticsReport), VizError> {
        let mut report = DiagnosticsReport::new();
        let (map, map_report) = build_map_dataset(&cookbooks, vocab);
        report.extend(map_report);
        let (matrix, cap_warning) = cap_matrix(build_cooccurrence_matrix(&cookbooks), options.matrix_cap)?;
        if let Some(w) = cap_warning {
            report.push(w);
        }
        let network = build_network(&matrix, options.edge_threshold)?;
        let units = build_units_profile(&cookbooks);
        let unit_grams = units
            .entries
            .iter()
            .filter_map(|(u, _)| vocab.grams_per_unit(u).map(|g| (u.clone(), g)))
            .collect();
        let gender_by_cookbook = cookbooks
            .iter()
            .map(|c| (c.id.clone(), vocab.gender_of(c.author.as_deref()).name().to_owned()))
            .collect();
        let dataset = SiteDataset {
            overview: overview_stats(&cookbooks, vocab),
            alphabet: index_by_letter(&cookbooks),
            categories: index_by_category(&cookbooks),
            ingredients: index_by_ingredient(&cookbooks),
            provenance: index_by_provenance(&cookbooks),
            map,
            matrix,
            network,
            piechart: build_piechart(&cookbooks),
            units,
            unit_grams,
            gender_by_cookbook,
            cookbooks,
        };
        Ok((dataset, report))
    }
}

pub fn cookbook_path(slug: &str) -> String {
    format!("{COOKBOOKS_DIR}/{slug}.json")
}

#[derive(Serialize)]
struct CookbookEntry<'a> {
    title: &'a str,
    path: String,
    recipe_count: usize,
}

#[derive(Serialize)]
struct General<'a> {
    cookbook_count: usize,
    recipe_count: usize,
    ingredient_count: usize,
    gender: &'a BTreeMap<String, usize>,
    files: BTreeMap<&'static str, &'static str>,
    cookbooks: BTreeMap<&'a str, CookbookEntry<'a>>,
}

#[derive(Serialize)]
struct RecipeSummary<'a> {
    title: &'a str,
    author: Option<&'a str>,
    cookbook: &'a str,
    course: Option<&'a str>,
    place: Option<&'a str>,
}

#[derive(Serialize)]
struct Facet<'a> {
    facet: &'static str,
    buckets: &'a BTreeMap<String, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    recipes: Option<BTreeMap<&'a str, RecipeSummary<'a>>>,
}

#[derive(Serialize)]
struct MapPointOut<'a> {
    city: &'a str,
    region: &'a str,
    country: &'a str,
    latitude: Decimal,
    longitude: Decimal,
    cookbook_count: usize,
    recipe_count: usize,
}

#[derive(Serialize)]
struct Labelled<'a> {
    label: &'a str,
    count: usize,
}

#[derive(Serialize)]
struct UnitOut<'a> {
    unit: &'a str,
    count: usize,
    grams_per_unit: Option<Decimal>,
}

#[derive(Serialize)]
struct IngredientOut<'a> {
    name: &'a str,
    raw: &'a str,
    qualifier: Option<&'a str>,
    variant: Option<&'a str>,
    quantity: Option<Decimal>,
    unit: Option<&'a str>,
}

#[derive(Serialize)]
struct RecipeOut<'a> {
    id: &'a str,
    title: &'a str,
    chapter: Option<&'a str>,
    course: Option<&'a str>,
    scope: Option<&'a str>,
    pages: &'a [String],
    images: &'a [String],
    ingredients: Vec<IngredientOut<'a>>,
    procedures: &'a [String],
    serves: Option<u32>,
    prep_time: Option<&'a str>,
    cook_time: Option<&'a str>,
    temperature: Option<&'a str>,
}

#[derive(Serialize)]
struct AcquisitionOut<'a> {
    place: &'a str,
    date: String,
}

#[derive(Serialize)]
struct CookbookOut<'a> {
    id: &'a str,
    title: &'a str,
    year_from: Option<i32>,
    year_to: Option<i32>,
    time_qualifier: Option<&'a str>,
    place: Option<&'a str>,
    region: Option<&'a str>,
    country: Option<&'a str>,
    author: Option<&'a str>,
    acquisition: Option<AcquisitionOut<'a>>,
    /// Recipe ids in source order; `recipes` itself is keyed (and therefore
    /// sorted) by id.
    recipe_order: Vec<&'a str>,
    recipes: BTreeMap<&'a str, RecipeOut<'a>>,
}

fn recipe_out(recipe: &Recipe) -> RecipeOut<'_> {
    RecipeOut {
        id: &recipe.id,
        title: &recipe.title,
        chapter: recipe.chapter.as_deref(),
        course: recipe.course_type.as_deref(),
        scope: recipe.scope.as_deref(),
        pages: &recipe.pages,
        images: &recipe.images,
        ingredients: recipe
            .ingredients
            .iter()
            .map(|i| IngredientOut {
                name: &i.canonical_name,
                raw: &i.raw_name,
                qualifier: i.qualifier.as_deref(),
                variant: i.variant_name.as_deref(),
                quantity: i.quantity_value.map(Decimal),
                unit: i.quantity_unit.as_deref(),
            })
            .collect(),
        procedures: &recipe.procedures,
        serves: recipe.serves,
        prep_time: recipe.prep_time.as_deref(),
        cook_time: recipe.cook_time.as_deref(),
        temperature: recipe.temperature.as_deref(),
    }
}

fn cookbook_out(cookbook: &Cookbook) -> CookbookOut<'_> {
    CookbookOut {
        id: &cookbook.id,
        title: &cookbook.title,
        year_from: cookbook.timespan.year_from,
        year_to: cookbook.timespan.year_to,
        time_qualifier: cookbook.timespan.qualifier.as_deref(),
        place: cookbook.place.as_deref(),
        region: cookbook.region.as_deref(),
        country: cookbook.country.as_deref(),
        author: cookbook.author.as_deref(),
        acquisition: cookbook.acquisition.as_ref().map(|a| AcquisitionOut {
            place: &a.place,
            date: a.date.format("%Y-%m-%d").to_string(),
        }),
        recipe_order: cookbook.recipes.iter().map(|r| r.id.as_str()).collect(),
        recipes: cookbook.recipes.iter().map(|r| (r.id.as_str(), recipe_out(r))).collect(),
    }
}

/// The per-cookbook record: metadata plus every recipe keyed by id.
pub fn emit_cookbook_file(cookbook: &Cookbook) -> Result<Value, EmitError> {
    serde_json::to_value(cookbook_out(cookbook)).map_err(EmitError::Serialize)
}

fn check_unique_ids(cookbooks: &[Cookbook]) -> Result<(), EmitError> {
    let mut seen: HashMap<&str, &str> = HashMap::new();
    for c in cookbooks {
        if let Some(first) = seen.insert(&c.id, &c.title) {
            return Err(EmitError::SlugCollision {
                slug: c.id.clone(),
                first: first.to_owned(),
                second: c.title.clone(),
            });
        }
    }
    Ok(())
}

/// Renders every artifact as `(path relative to the output root, bytes)`,
/// `general.json` first, then the other top-level files, then cookbooks
/// in slug order.
pub fn render_site(dataset: &SiteDataset) -> Result<Vec<(String, Vec<u8>)>, EmitError> {
    check_unique_ids(&dataset.cookbooks)?;
    let mut files = Vec::new();

    let general = General {
        cookbook_count: dataset.overview.cookbook_count,
        recipe_count: dataset.overview.recipe_count,
        ingredient_count: dataset.overview.ingredient_count,
        gender: &dataset.overview.gender,
        files: TOP_LEVEL_FILES.into_iter().collect(),
        cookbooks: dataset
            .cookbooks
            .iter()
            .map(|c| {
                (
                    c.id.as_str(),
                    CookbookEntry {
                        title: &c.title,
                        path: cookbook_path(&c.id),
                        recipe_count: c.recipes.len(),
                    },
                )
            })
            .collect(),
    };
    files.push((GENERAL_FILE.to_owned(), canonical_json(&general)?));

    let summaries: BTreeMap<&str, RecipeSummary<'_>> = display_order(&dataset.cookbooks)
        .into_iter()
        .map(|(c, r)| {
            (
                r.id.as_str(),
                RecipeSummary {
                    title: &r.title,
                    author: c.author.as_deref(),
                    cookbook: &c.id,
                    course: r.course_type.as_deref(),
                    place: c.place.as_deref(),
                },
            )
        })
        .collect();
    let facet = |index: &FacetIndex, with_recipes: bool| -> Result<Vec<u8>, EmitError> {
        canonical_json(&Facet {
            facet: index.facet.name(),
            buckets: &index.buckets,
            recipes: with_recipes.then(|| {
                summaries
                    .iter()
                    .map(|(k, v)| {
                        (
                            *k,
                            RecipeSummary {
                                title: v.title,
                                author: v.author,
                                cookbook: v.cookbook,
                                course: v.course,
                                place: v.place,
                            },
                        )
                    })
                    .collect()
            }),
        })
    };
    files.push(("alphabet.json".into(), facet(&dataset.alphabet, true)?));
    files.push(("categories.json".into(), facet(&dataset.categories, false)?));
    files.push(("ingredients.json".into(), facet(&dataset.ingredients, false)?));
    files.push(("provenance.json".into(), facet(&dataset.provenance, false)?));

    let points: Vec<MapPointOut<'_>> = dataset
        .map
        .points
        .iter()
        .map(|p| MapPointOut {
            city: &p.city,
            region: &p.region,
            country: &p.country,
            latitude: Decimal(p.latitude),
            longitude: Decimal(p.longitude),
            cookbook_count: p.cookbook_count,
            recipe_count: p.recipe_count,
        })
        .collect();
    files.push((
        "map.json".into(),
        canonical_json(&serde_json::json!({ "points": points }))?,
    ));

    files.push((
        "matrix.json".into(),
        canonical_json(&serde_json::json!({
            "labels": dataset.matrix.labels,
            "cells": dataset.matrix.cells,
        }))?,
    ));

    let nodes: Vec<Value> = dataset
        .network
        .nodes
        .iter()
        .map(|n| serde_json::json!({ "id": n.ingredient, "weight": n.weight }))
        .collect();
    let edges: Vec<Value> = dataset
        .network
        .edges
        .iter()
        .map(|e| serde_json::json!({ "source": e.source, "target": e.target, "weight": e.weight }))
        .collect();
    files.push((
        "network.json".into(),
        canonical_json(&serde_json::json!({
            "threshold": dataset.network.threshold,
            "nodes": nodes,
            "edges": edges,
        }))?,
    ));

    let slices: Vec<Labelled<'_>> = dataset
        .piechart
        .slices
        .iter()
        .map(|(label, count)| Labelled { label, count: *count })
        .collect();
    files.push((
        "piechart.json".into(),
        canonical_json(&serde_json::json!({ "slices": slices }))?,
    ));

    let entries: Vec<UnitOut<'_>> = dataset
        .units
        .entries
        .iter()
        .map(|(unit, count)| UnitOut {
            unit,
            count: *count,
            grams_per_unit: dataset.unit_grams.get(unit).copied().map(Decimal),
        })
        .collect();
    let total: usize = dataset.units.entries.iter().map(|(_, c)| c).sum();
    files.push((
        "units.json".into(),
        canonical_json(&serde_json::json!({ "entries": entries, "total_uses": total }))?,
    ));

    let mut cookbooks: Vec<&Cookbook> = dataset.cookbooks.iter().collect();
    cookbooks.sort_by(|a, b| a.id.cmp(&b.id));
    for cookbook in cookbooks {
        let mut out = serde_json::to_value(cookbook_out(cookbook)).map_err(EmitError::Serialize)?;
        if let Some(gender) = dataset.gender_by_cookbook.get(&cookbook.id) {
            out["author_gender"] = Value::String(gender.clone());
        }
        files.push((cookbook_path(&cookbook.id), canonical_json(&out)?));
    }
    Ok(files)
}

/// Relative paths of the files an emission wrote, in write order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    pub files: Vec<String>,
}

const TMP_SUFFIX: &str = ".cucina-tmp";

/// Writes the artifact set under `out_dir`.
///
/// Every file is first written to a temporary sibling; only when all writes
/// succeed are they renamed into place. Unrelated files in `out_dir` are
/// left alone.
pub fn emit_site_data(dataset: &SiteDataset, out_dir: &Path) -> Result<Manifest, EmitError> {
    let files = render_site(dataset)?;
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| EmitError::Io { path, source }
    };
    fs::create_dir_all(out_dir.join(COOKBOOKS_DIR)).map_err(io(&out_dir.join(COOKBOOKS_DIR)))?;

    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(files.len());
    let mut result = Ok(());
    for (rel, bytes) in &files {
        let target = out_dir.join(rel);
        let mut tmp = target.clone().into_os_string();
        tmp.push(TMP_SUFFIX);
        let tmp = PathBuf::from(tmp);
        if let Err(e) = fs::write(&tmp, bytes) {
            result = Err(io(&tmp)(e));
            break;
        }
        staged.push((tmp, target));
    }
    if let Err(e) = result {
        for (tmp, _) in &staged {
            let _ = fs::remove_file(tmp);
        }
        return Err(e);
    }
    for (tmp, target) in &staged {
        fs::rename(tmp, target).map_err(io(target))?;
    }
    Ok(Manifest {
        files: files.into_iter().map(|(rel, _)| rel).collect(),
    })
}
