//! Datasets behind the homepage charts: provenance map, ingredient
//! co-occurrence matrix and network, course pie chart, units profile.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::aggregate::index_by_category;
use crate::diagnostics::{codes, Diagnostic, DiagnosticsReport};
use crate::model::{recipes, Cookbook};
use crate::vocab::{Facet, VocabularySet};

pub const UNSPECIFIED_UNIT: &str = "unspecified";
pub const DEFAULT_EDGE_THRESHOLD: usize = 1;
pub const DEFAULT_MATRIX_CAP: usize = 200;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum VizError {
    #[error("network edge threshold must be at least 1, got {0}")]
    InvalidThreshold(usize),
    #[error("matrix ingredient cap must be at least 1, got {0}")]
    InvalidCap(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapPoint {
    pub city: String,
    pub region: String,
    pub country: String,
    pub latitude: f64,
    pub longitude: f64,
    pub cookbook_count: usize,
    pub recipe_count: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MapDataset {
    /// One point per city, sorted by city name.
    pub points: Vec<MapPoint>,
}

/// Aggregates cookbooks per city. Cities missing from the geography
/// vocabulary, or present without coordinates, are left off the map and
/// reported.
pub fn build_map_dataset(cookbooks: &[Cookbook], vocab: &VocabularySet) -> (MapDataset, DiagnosticsReport) {
    let mut report = DiagnosticsReport::new();
    let mut per_city: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut reported_without_coords = BTreeSet::new();
    for cookbook in cookbooks {
        let Some(place) = cookbook.place.as_deref() else {
            continue;
        };
        let Some(city) = vocab.geography.city(place) else {
            let mut d = Diagnostic::warning(codes::UNKNOWN_CITY, format!("unknown {} {place:?}", Facet::City))
                .at_column("place");
            d.row = cookbook.first_row;
            report.push(d);
            continue;
        };
        if city.coordinates().is_none() {
            if reported_without_coords.insert(city.name.as_str()) {
                let mut d = Diagnostic::warning(
                    codes::MISSING_COORDINATES,
                    format!("city {:?} has no coordinates; left off the map", city.name),
                )
                .at_column("place");
                d.row = cookbook.first_row;
                report.push(d);
            }
            continue;
        }
        let entry = per_city.entry(city.name.as_str()).or_default();
        entry.0 += 1;
        entry.1 += cookbook.recipes.len();
    }
    let points = per_city
        .into_iter()
        .map(|(name, (cookbook_count, recipe_count))| {
            let city = vocab.geography.city(name).expect("city resolved above");
            let (latitude, longitude) = city.coordinates().expect("coordinates checked above");
            MapPoint {
                city: city.name.clone(),
                region: city.region.clone(),
                country: city.country.clone(),
                latitude,
                longitude,
                cookbook_count,
                recipe_count,
            }
        })
        .collect();
    (MapDataset { points }, report)
}

/// `cells[i][j]` = number of recipes using both `labels[i]` and `labels[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CooccurrenceMatrix {
    /// Canonical ingredients, sorted.
    pub labels: Vec<String>,
    pub cells: Vec<Vec<usize>>,
}

impl CooccurrenceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, a: &str, b: &str) -> Option<usize> {
        let i = self.labels.binary_search_by(|l| l.as_str().cmp(a)).ok()?;
        let j = self.labels.binary_search_by(|l| l.as_str().cmp(b)).ok()?;
        Some(self.cells[i][j])
    }
}

/// Raw co-occurrence counts; each recipe contributes at most one to a cell.
pub fn build_cooccurrence_matrix(cookbooks: &[Cookbook]) -> CooccurrenceMatrix {
    let labels: Vec<String> = recipes(cookbooks)
        .flat_map(|(_, r)| r.ingredients.iter().map(|i| i.canonical_name.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let position: HashMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let n = labels.len();
    let mut cells = vec![vec![0usize; n]; n];
    for (_, recipe) in recipes(cookbooks) {
        let mut present: Vec<usize> = recipe
            .ingredients
            .iter()
            .map(|i| position[i.canonical_name.as_str()])
            .collect();
        present.sort_unstable();
        present.dedup();
        for (k, &i) in present.iter().enumerate() {
            cells[i][i] += 1;
            for &j in &present[k + 1..] {
                cells[i][j] += 1;
                cells[j][i] += 1;
            }
        }
    }
    CooccurrenceMatrix { labels, cells }
}

/// Keeps the `cap` ingredients used by the most recipes (ties broken by
/// label), reporting a warning when anything is dropped.
pub fn cap_matrix(
    matrix: CooccurrenceMatrix,
    cap: usize,
) -> Result<(CooccurrenceMatrix, Option<Diagnostic>), VizError> {
    if cap == 0 {
        return Err(VizError::InvalidCap(cap));
    }
    let n = matrix.len();
    if n <= cap {
        return Ok((matrix, None));
    }
    let mut ranked: Vec<usize> = (0..n).collect();
    ranked.sort_by_key(|&i| (Reverse(matrix.cells[i][i]), &matrix.labels[i]));
    let mut keep: Vec<usize> = ranked[..cap].to_vec();
    keep.sort_unstable();
    let capped = CooccurrenceMatrix {
        labels: keep.iter().map(|&i| matrix.labels[i].clone()).collect(),
        cells: keep
            .iter()
            .map(|&i| keep.iter().map(|&j| matrix.cells[i][j]).collect())
            .collect(),
    };
    let warning = Diagnostic::warning(
        codes::MATRIX_CAPPED,
        format!("{n} distinct ingredients exceed the matrix cap of {cap}; kept the {cap} most used"),
    );
    Ok((capped, Some(warning)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkNode {
    pub ingredient: String,
    /// Recipes using the ingredient.
    pub weight: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NetworkEdge {
    /// `source < target` lexicographically.
    pub source: String,
    pub target: String,
    pub weight: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IngredientNetwork {
    pub threshold: usize,
    pub nodes: Vec<NetworkNode>,
    pub edges: Vec<NetworkEdge>,
}

/// One node per matrix label (isolated nodes included) and one edge per
/// unordered pair whose co-occurrence reaches `threshold`.
pub fn build_network(matrix: &CooccurrenceMatrix, threshold: usize) -> Result<IngredientNetwork, VizError> {
    if threshold < 1 {
        return Err(VizError::InvalidThreshold(threshold));
    }
    let nodes = matrix
        .labels
        .iter()
        .enumerate()
        .map(|(i, label)| NetworkNode {
            ingredient: label.clone(),
            weight: matrix.cells[i][i],
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..matrix.len() {
        for j in i + 1..matrix.len() {
            let weight = matrix.cells[i][j];
            if weight >= threshold {
                edges.push(NetworkEdge {
                    source: matrix.labels[i].clone(),
                    target: matrix.labels[j].clone(),
                    weight,
                });
            }
        }
    }
    Ok(IngredientNetwork {
        threshold,
        nodes,
        edges,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PieDataset {
    /// (course, recipes), by descending count then label.
    pub slices: Vec<(String, usize)>,
}

pub fn build_piechart(cookbooks: &[Cookbook]) -> PieDataset {
    let mut slices: Vec<(String, usize)> = index_by_category(cookbooks)
        .buckets
        .into_iter()
        .map(|(k, v)| (k, v.len()))
        .collect();
    sort_tallies(&mut slices);
    PieDataset { slices }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnitsProfile {
    /// (unit or `unspecified`, ingredient uses), by descending count then label.
    pub entries: Vec<(String, usize)>,
}

/// Ingredient uses per unit of measure; uses without a unit count as
/// `unspecified`.
pub fn build_units_profile(cookbooks: &[Cookbook]) -> UnitsProfile {
    let mut tallies: BTreeMap<String, usize> = BTreeMap::new();
    for (_, recipe) in recipes(cookbooks) {
        for use_ in &recipe.ingredients {
            let unit = use_.quantity_unit.as_deref().unwrap_or(UNSPECIFIED_UNIT);
            *tallies.entry(unit.to_owned()).or_default() += 1;
        }
    }
    let mut entries: Vec<_> = tallies.into_iter().collect();
    sort_tallies(&mut entries);
    UnitsProfile { entries }
}

fn sort_tallies(entries: &mut [(String, usize)]) {
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{IngredientUse, Recipe};
    use crate::vocab::parse_vocabulary_files;

    fn corpus(recipes: &[&[&str]]) -> Vec<Cookbook> {
        vec![Cookbook {
            id: "c".into(),
            title: "c".into(),
            recipes: recipes
                .iter()
                .enumerate()
                .map(|(n, ings)| Recipe {
                    id: format!("c/r{n}"),
                    title: format!("r{n}"),
                    ingredients: ings
                        .iter()
                        .map(|i| IngredientUse {
                            canonical_name: (*i).into(),
                            raw_name: (*i).into(),
                            ..IngredientUse::default()
                        })
                        .collect(),
                    ..Recipe::default()
                })
                .collect(),
            ..Cookbook::default()
        }]
    }

    #[test]
    fn two_recipe_matrix() {
        let m = build_cooccurrence_matrix(&corpus(&[&["egg", "flour"], &["egg", "sugar"]]));
        assert_eq!(m.labels, ["egg", "flour", "sugar"]);
        assert_eq!(m.get("egg", "egg"), Some(2));
        assert_eq!(m.get("egg", "flour"), Some(1));
        assert_eq!(m.get("flour", "sugar"), Some(0));
        assert_eq!(m.cells, vec![vec![2, 1, 1], vec![1, 1, 0], vec![1, 0, 1]]);
    }

    #[test]
    fn repeated_ingredient_counts_once() {
        let m = build_cooccurrence_matrix(&corpus(&[&["egg", "egg", "butter"]]));
        assert_eq!(m.get("egg", "egg"), Some(1));
        assert_eq!(m.get("egg", "butter"), Some(1));
    }

    #[test]
    fn trivial_matrices() {
        assert!(build_cooccurrence_matrix(&[]).is_empty());
        let m = build_cooccurrence_matrix(&corpus(&[&["butter"]]));
        assert_eq!(m.cells, vec![vec![1]]);
    }

    #[test]
    fn network_thresholds() {
        let m = build_cooccurrence_matrix(&corpus(&[&["egg", "flour"], &["egg", "sugar"]]));
        let net = build_network(&m, 1).unwrap();
        let edges: Vec<_> = net.edges.iter().map(|e| (e.source.as_str(), e.target.as_str(), e.weight)).collect();
        assert_eq!(edges, [("egg", "flour", 1), ("egg", "sugar", 1)]);
        let net = build_network(&m, 2).unwrap();
        assert!(net.edges.is_empty());
        assert_eq!(net.nodes.len(), 3);
        assert_eq!(build_network(&m, 0), Err(VizError::InvalidThreshold(0)));
    }

    #[test]
    fn capping_keeps_most_used() {
        let m = build_cooccurrence_matrix(&corpus(&[&["egg", "flour"], &["egg", "sugar"], &["sugar"]]));
        let (capped, warning) = cap_matrix(m.clone(), 2).unwrap();
        assert_eq!(capped.labels, ["egg", "sugar"]);
        assert_eq!(capped.cells, vec![vec![2, 1], vec![1, 2]]);
        assert_eq!(warning.unwrap().code, codes::MATRIX_CAPPED);
        let (same, none) = cap_matrix(m.clone(), 3).unwrap();
        assert_eq!(same, m);
        assert!(none.is_none());
        assert_eq!(cap_matrix(m, 0), Err(VizError::InvalidCap(0)));
    }

    #[test]
    fn units_profile_of_recipe_card() {
        // Ingredient list of the "Pasticcio di maccheroni" card, transcribed.
        let card: [(&str, Option<&str>); 18] = [
            ("rigatoni", Some("g")),
            ("parmesan", Some("hg")),
            ("sweetbread", Some("hg")),
            ("butter", Some("g")),
            ("truffle", Some("g")),
            ("mushroom", None),
            ("chicken", None),
            ("ham", Some("g")),
            ("crest", None),
            ("bean", None),
            ("egg", None),
            ("egg", None),
            ("nutmeg", None),
            ("egg", None),
            ("bechamel", None),
            ("butter", None),
            ("sugar", None),
            ("flour", None),
        ];
        let mut cookbooks = corpus(&[&[]]);
        cookbooks[0].recipes[0].ingredients = card
            .iter()
            .map(|(name, unit)| IngredientUse {
                canonical_name: (*name).into(),
                quantity_unit: unit.map(Into::into),
                ..IngredientUse::default()
            })
            .collect();
        // Tally oracle.
        let mut expected: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, unit) in &card {
            *expected.entry(unit.unwrap_or(UNSPECIFIED_UNIT)).or_default() += 1;
        }
        assert_eq!(expected, BTreeMap::from([("g", 4), ("hg", 2), (UNSPECIFIED_UNIT, 12)]));
        let profile = build_units_profile(&cookbooks);
        assert_eq!(
            profile.entries,
            vec![(UNSPECIFIED_UNIT.to_owned(), 12), ("g".to_owned(), 4), ("hg".to_owned(), 2)]
        );
    }

    #[test]
    fn units_profile_trivia() {
        assert!(build_units_profile(&[]).entries.is_empty());
        let mut c = corpus(&[&["a", "b"], &["c"]]);
        for r in &mut c[0].recipes {
            for i in &mut r.ingredients {
                i.quantity_unit = Some("g".into());
            }
        }
        assert_eq!(build_units_profile(&c).entries, vec![("g".to_owned(), 3)]);
    }

    #[test]
    fn piechart_orders_by_count() {
        let mut c = corpus(&[&[], &[], &[], &[]]);
        c[0].recipes[0].course_type = Some("first".into());
        c[0].recipes[1].course_type = Some("first".into());
        c[0].recipes[2].course_type = Some("dessert".into());
        let pie = build_piechart(&c);
        assert_eq!(
            pie.slices,
            vec![
                ("first".to_owned(), 2),
                ("dessert".to_owned(), 1),
                ("uncategorised".to_owned(), 1)
            ]
        );
        assert!(build_piechart(&[]).slices.is_empty());
    }

    #[test]
    fn map_points_and_warnings() {
        let (vocab, _) = parse_vocabulary_files([(
            "geography.tsv",
            "city\tregion\tcountry\tlat\tlon\nRimini\tEmilia Romagna\tItaly\t44.06\t12.57\nForlì\tEmilia Romagna\tItaly\t44.22\t12.04\nCesena\tEmilia Romagna\tItaly\t\t\n",
        )]);
        let book = |id: &str, place: &str, n: usize| Cookbook {
            id: id.into(),
            title: id.into(),
            place: Some(place.into()),
            first_row: Some(2),
            recipes: (0..n).map(|i| Recipe { id: format!("{id}/{i}"), ..Recipe::default() }).collect(),
            ..Cookbook::default()
        };
        let cookbooks = vec![book("a", "Rimini", 2), book("b", "rimini", 3), book("c", "Forlì", 1), book("d", "Cesena", 4), book("e", "Bologna", 5)];
        let (map, report) = build_map_dataset(&cookbooks, &vocab);
        let summary: Vec<_> = map.points.iter().map(|p| (p.city.as_str(), p.cookbook_count, p.recipe_count)).collect();
        assert_eq!(summary, [("Forlì", 1, 1), ("Rimini", 2, 5)]);
        assert_eq!(report.with_code(codes::MISSING_COORDINATES).count(), 1);
        assert_eq!(report.with_code(codes::UNKNOWN_CITY).count(), 1);

        let (empty, report) = build_map_dataset(&[book("x", "Atlantis", 1)], &VocabularySet::new());
        assert!(empty.points.is_empty());
        assert_eq!(report.len(), 1);
    }
}
