use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::text::match_key;

/// A vocabulary-controlled dimension of the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Facet {
    Ingredient,
    Course,
    Procedure,
    Unit,
    Scope,
    City,
}

impl Facet {
    pub const ALL: [Facet; 6] = [
        Facet::Ingredient,
        Facet::Course,
        Facet::Procedure,
        Facet::Unit,
        Facet::Scope,
        Facet::City,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Facet::Ingredient => "ingredient",
            Facet::Course => "course",
            Facet::Procedure => "procedure",
            Facet::Unit => "unit",
            Facet::Scope => "scope",
            Facet::City => "city",
        }
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of looking a raw term up in a facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    /// Matched a canonical term directly.
    Canonical(String),
    /// Matched a linguistic variant; carries the canonical term.
    Variant(String),
    /// Not in the vocabulary; carries the trimmed raw text.
    Unknown(String),
}

impl Resolution {
    pub fn term(&self) -> &str {
        match self {
            Resolution::Canonical(t) | Resolution::Variant(t) | Resolution::Unknown(t) => t,
        }
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, Resolution::Unknown(_))
    }

    pub fn was_variant(&self) -> bool {
        matches!(self, Resolution::Variant(_))
    }
}

/// Canonical terms in load order with a case-insensitive index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TermSet {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl TermSet {
    /// Inserts `term`; returns the already-present canonical spelling when
    /// the term collides after case-folding and trimming.
    pub fn insert(&mut self, term: &str) -> Result<(), String> {
        let key = match_key(term);
        if let Some(&i) = self.index.get(&key) {
            return Err(self.terms[i].clone());
        }
        self.index.insert(key, self.terms.len());
        self.terms.push(term.trim().to_owned());
        Ok(())
    }

    pub fn get(&self, raw: &str) -> Option<&str> {
        self.index.get(&match_key(raw)).map(|&i| self.terms[i].as_str())
    }

    pub fn contains(&self, raw: &str) -> bool {
        self.get(raw).is_some()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct City {
    pub name: String,
    pub region: String,
    pub country: String,
    pub latitude: Option<f64>,
    pub longitude: Option<f64>,
}

impl City {
    pub fn coordinates(&self) -> Option<(f64, f64)> {
        self.latitude.zip(self.longitude)
    }
}

/// City → region → country hierarchy.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Geography {
    cities: Vec<City>,
    index: HashMap<String, usize>,
    /// region key → (region, country)
    regions: BTreeMap<String, (String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeographyConflict {
    /// City already present under the same region.
    Duplicate,
    /// City already present under another region.
    CityRegion { existing_region: String },
    /// Region already attached to another country.
    RegionCountry { existing_country: String },
}

impl Geography {
    pub fn insert(&mut self, city: City) -> Result<(), GeographyConflict> {
        let region_key = match_key(&city.region);
        if let Some((_, country)) = self.regions.get(&region_key) {
            if match_key(country) != match_key(&city.country) {
                return Err(GeographyConflict::RegionCountry {
                    existing_country: country.clone(),
                });
            }
        }
        let city_key = match_key(&city.name);
        if let Some(&i) = self.index.get(&city_key) {
            let existing = &self.cities[i];
            return Err(if match_key(&existing.region) == region_key {
                GeographyConflict::Duplicate
            } else {
                GeographyConflict::CityRegion {
                    existing_region: existing.region.clone(),
                }
            });
        }
        self.regions
            .entry(region_key)
            .or_insert_with(|| (city.region.clone(), city.country.clone()));
        self.index.insert(city_key, self.cities.len());
        self.cities.push(city);
        Ok(())
    }

    pub fn city(&self, raw: &str) -> Option<&City> {
        self.index.get(&match_key(raw)).map(|&i| &self.cities[i])
    }

    pub fn cities(&self) -> &[City] {
        &self.cities
    }

    pub fn region_count(&self) -> usize {
        self.regions.len()
    }

    pub fn country_count(&self) -> usize {
        let mut countries: Vec<String> = self.regions.values().map(|(_, c)| match_key(c)).collect();
        countries.sort();
        countries.dedup();
        countries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cities.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gender {
    Female,
    Male,
    Unknown,
}

impl Gender {
    pub fn name(self) -> &'static str {
        match self {
            Gender::Female => "female",
            Gender::Male => "male",
            Gender::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Gender> {
        match s.trim().to_lowercase().as_str() {
            "female" => Some(Gender::Female),
            "male" => Some(Gender::Male),
            "unknown" => Some(Gender::Unknown),
            _ => None,
        }
    }
}

/// Every controlled vocabulary and folksonomy used to normalize the corpus.
/// Immutable once loaded.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VocabularySet {
    pub ingredients: TermSet,
    /// variant key → canonical ingredient
    pub(crate) variants: HashMap<String, String>,
    pub courses: TermSet,
    pub procedures: TermSet,
    pub units: TermSet,
    pub(crate) grams_per_unit: HashMap<String, f64>,
    pub scopes: TermSet,
    pub geography: Geography,
    /// author key → (name, gender)
    pub(crate) authors: HashMap<String, (String, Gender)>,
}

impl VocabularySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Exact case-insensitive match against canonical terms, then (for
    /// ingredients) against the variant map.
    pub fn resolve(&self, facet: Facet, raw: &str) -> Resolution {
        let hit = match facet {
            Facet::Ingredient => self.ingredients.get(raw),
            Facet::Course => self.courses.get(raw),
            Facet::Procedure => self.procedures.get(raw),
            Facet::Unit => self.units.get(raw),
            Facet::Scope => self.scopes.get(raw),
            Facet::City => self.geography.city(raw).map(|c| c.name.as_str()),
        };
        if let Some(term) = hit {
            return Resolution::Canonical(term.to_owned());
        }
        if facet == Facet::Ingredient {
            if let Some(canonical) = self.variants.get(&match_key(raw)) {
                return Resolution::Variant(canonical.clone());
            }
        }
        Resolution::Unknown(raw.trim().to_owned())
    }

    /// Variant spellings mapped to their canonical ingredient, sorted.
    pub fn variants(&self) -> BTreeMap<&str, &str> {
        self.variants
            .iter()
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect()
    }

    pub fn grams_per_unit(&self, unit: &str) -> Option<f64> {
        self.grams_per_unit.get(&match_key(unit)).copied()
    }

    /// Registered gender of `author`; `Unknown` when unregistered or absent.
    pub fn gender_of(&self, author: Option<&str>) -> Gender {
        author
            .and_then(|a| self.authors.get(&match_key(a)))
            .map_or(Gender::Unknown, |(_, g)| *g)
    }

    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ingredients.is_empty()
            && self.courses.is_empty()
            && self.procedures.is_empty()
            && self.units.is_empty()
            && self.scopes.is_empty()
            && self.geography.is_empty()
            && self.authors.is_empty()
            && self.variants.is_empty()
    }
}

/// Free-function form of [`VocabularySet::resolve`].
pub fn resolve_term(facet: Facet, raw: &str, vocab: &VocabularySet) -> Resolution {
    vocab.resolve(facet, raw)
}
