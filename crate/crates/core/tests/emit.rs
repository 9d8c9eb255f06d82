mod common;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use common::{extract, path_arg, run_cli, synthetic_table, tree_hashes, write_inputs, HEADER};
use cucina::emit::{canonical_json, emit_site_data, render_site, DatasetOptions, EmitError, SiteDataset};
use cucina::model::{Cookbook, Recipe};
use cucina::vocab::VocabularySet;
use serde_json::Value;

fn build(table: &Path, vocab: &Path, out: &Path) -> (u8, String, String) {
    run_cli(&["build", "--input", &path_arg(table), "--vocab", &path_arg(vocab), "--out", &path_arg(out)])
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn rebuilds_are_byte_identical() {
    let f = extract();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(build(&f.table, &f.vocab, a.path()).0, 0);
    assert_eq!(build(&f.table, &f.vocab, b.path()).0, 0);
    let first = tree_hashes(a.path());
    assert_eq!(first.len(), 11);
    assert_eq!(first, tree_hashes(b.path()));
    assert_eq!(build(&f.table, &f.vocab, a.path()).0, 0);
    assert_eq!(first, tree_hashes(a.path()));
}

#[test]
fn emitted_files_are_canonical() {
    let f = extract();
    let out = tempfile::tempdir().unwrap();
    build(&f.table, &f.vocab, out.path());
    for rel in tree_hashes(out.path()).keys() {
        let bytes = fs::read(out.path().join(rel)).unwrap();
        let text = std::str::from_utf8(&bytes).unwrap();
        assert!(text.ends_with("}\n"), "{rel}");
        assert!(!text.contains('\r'), "{rel}");
        assert!(text.lines().all(|l| l == l.trim_end()), "{rel}");
        let value: Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(canonical_json(&value).unwrap(), bytes, "{rel}");
    }
}

#[test]
fn index_ids_and_registry_paths_resolve() {
    let dir = tempfile::tempdir().unwrap();
    let (table, vocab) = write_inputs(dir.path(), &synthetic_table(200, 7));
    let out = dir.path().join("site");
    assert_eq!(build(&table, &vocab, &out).0, 0);
    let general = read_json(&out.join("general.json"));

    for path in general["files"].as_object().unwrap().values() {
        assert!(out.join(path.as_str().unwrap()).is_file(), "{path}");
    }
    let mut owner: HashMap<String, usize> = HashMap::new();
    for entry in general["cookbooks"].as_object().unwrap().values() {
        let file = read_json(&out.join(entry["path"].as_str().unwrap()));
        let recipes = file["recipes"].as_object().unwrap();
        assert_eq!(recipes.len() as u64, entry["recipe_count"].as_u64().unwrap());
        for id in recipes.keys() {
            *owner.entry(id.clone()).or_default() += 1;
        }
    }
    assert_eq!(owner.len(), 200);
    assert!(owner.values().all(|&n| n == 1));
    for facet in ["alphabet", "categories", "ingredients", "provenance"] {
        let index = read_json(&out.join(format!("{facet}.json")));
        for ids in index["buckets"].as_object().unwrap().values() {
            for id in ids.as_array().unwrap() {
                assert!(owner.contains_key(id.as_str().unwrap()), "{facet}: {id}");
            }
        }
    }
    let alphabet = read_json(&out.join("alphabet.json"));
    assert_eq!(alphabet["recipes"].as_object().unwrap().len(), 200);
}

#[test]
fn empty_table_emits_empty_collections() {
    let dir = tempfile::tempdir().unwrap();
    let (table, vocab) = write_inputs(dir.path(), &format!("{HEADER}\n"));
    let out = dir.path().join("site");
    let (code, stdout, _) = build(&table, &vocab, &out);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 10);
    let general = read_json(&out.join("general.json"));
    assert_eq!(general["recipe_count"], 0);
    assert!(general["cookbooks"].as_object().unwrap().is_empty());
    assert!(read_json(&out.join("matrix.json"))["labels"].as_array().unwrap().is_empty());
    assert!(read_json(&out.join("map.json"))["points"].as_array().unwrap().is_empty());
}

#[test]
fn unrelated_files_survive_and_no_temporaries_remain() {
    let f = extract();
    let out = tempfile::tempdir().unwrap();
    fs::write(out.path().join("README.txt"), "keep me").unwrap();
    fs::create_dir(out.path().join("cookbooks")).unwrap();
    fs::write(out.path().join("cookbooks/old.json"), "{}").unwrap();
    assert_eq!(build(&f.table, &f.vocab, out.path()).0, 0);
    let files = common::list_files(out.path());
    assert!(files.contains(&"README.txt".to_owned()));
    assert!(files.contains(&"cookbooks/old.json".to_owned()));
    assert!(files.iter().all(|f| !f.contains("tmp")), "{files:?}");
    assert_eq!(fs::read_to_string(out.path().join("README.txt")).unwrap(), "keep me");
}

#[test]
fn zero_recipe_cookbook_has_empty_recipe_map() {
    let cookbook = Cookbook { id: "vuoto".into(), title: "Vuoto".into(), ..Cookbook::default() };
    let value = cucina::emit::emit_cookbook_file(&cookbook).unwrap();
    assert!(value["recipes"].as_object().unwrap().is_empty());
    assert_eq!(value["acquisition"], Value::Null);
}

#[test]
fn cookbook_id_collision_is_fatal() {
    let recipe = |id: &str| Recipe { id: id.into(), title: "Brodo".into(), ..Recipe::default() };
    let cookbooks = vec![
        Cookbook { id: "quaderno-a".into(), title: "Quaderno A".into(), recipes: vec![recipe("quaderno-a/brodo")], ..Cookbook::default() },
        Cookbook { id: "quaderno-a".into(), title: "quaderno a".into(), recipes: vec![recipe("quaderno-a/brodo")], ..Cookbook::default() },
    ];
    let (dataset, _) = SiteDataset::build(cookbooks, &VocabularySet::new(), DatasetOptions::default()).unwrap();
    assert!(matches!(render_site(&dataset), Err(EmitError::SlugCollision { .. })));
    let out = tempfile::tempdir().unwrap();
    assert!(emit_site_data(&dataset, out.path()).is_err());
    assert!(common::list_files(out.path()).is_empty());

    let dir = tempfile::tempdir().unwrap();
    let table = format!(
        "{HEADER}\nQuaderno A\t\t\t\t\t\t\t\t\t\t\tBrodo\t\t\t\t\t\t\t\t\t\t\nquaderno a\t\t\t\t\t\t\t\t\t\t\tBrodo\t\t\t\t\t\t\t\t\t\t\n"
    );
    let (table, vocab) = write_inputs(dir.path(), &table);
    let (code, _, stderr) = build(&table, &vocab, &dir.path().join("site"));
    assert_eq!(code, 2, "{stderr}");
    assert!(stderr.contains("duplicate_cookbook_id"));
}

#[test]
fn network_threshold_and_matrix_cap_flags() {
    let dir = tempfile::tempdir().unwrap();
    let (table, vocab) = write_inputs(dir.path(), &synthetic_table(60, 3));
    let out = dir.path().join("site");
    let (code, _, stderr) = run_cli(&[
        "build", "--input", &path_arg(&table), "--vocab", &path_arg(&vocab), "--out", &path_arg(&out),
        "--edge-threshold", "5", "--matrix-cap", "4",
    ]);
    assert_eq!(code, 0);
    assert!(stderr.contains("matrix_capped"), "{stderr}");
    let matrix = read_json(&out.join("matrix.json"));
    assert_eq!(matrix["labels"].as_array().unwrap().len(), 4);
    let network = read_json(&out.join("network.json"));
    assert_eq!(network["threshold"], 5);
    assert!(network["edges"].as_array().unwrap().iter().all(|e| e["weight"].as_u64().unwrap() >= 5));
    let units = read_json(&out.join("units.json"));
    let by_unit: BTreeMap<&str, &Value> =
        units["entries"].as_array().unwrap().iter().map(|e| (e["unit"].as_str().unwrap(), &e["grams_per_unit"])).collect();
    assert_eq!(by_unit["hg"], &Value::from(100));
    assert_eq!(by_unit["spoon"], &Value::Null);

    let (code, _, stderr) = run_cli(&[
        "build", "--input", &path_arg(&table), "--vocab", &path_arg(&vocab), "--out", &path_arg(&out),
        "--edge-threshold", "0",
    ]);
    assert_eq!(code, 2, "{stderr}");
}
