#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cucina::model::{Cookbook, IngredientUse, Recipe};
use rand::seq::SliceRandom;
use rand::Rng;
use sha2::{Digest, Sha256};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub struct Fixture {
    pub table: PathBuf,
    pub vocab: PathBuf,
    pub images: PathBuf,
}

pub fn extract() -> Fixture {
    let root = fixtures().join("extract");
    Fixture {
        table: root.join("table.tsv"),
        vocab: root.join("vocab"),
        images: root.join("images"),
    }
}

pub fn recipe_card() -> PathBuf {
    fixtures().join("recipe_card.tsv")
}

/// Runs the command line in-process: (exit status, stdout, stderr).
pub fn run_cli<S: AsRef<str>>(args: &[S]) -> (u8, String, String) {
    let mut argv = vec!["cucina".to_owned()];
    argv.extend(args.iter().map(|a| a.as_ref().to_owned()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cucina::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn path_arg(p: &Path) -> String {
    p.to_str().expect("utf-8 path").to_owned()
}

/// Relative path → SHA-256 for every file below `root`.
pub fn tree_hashes(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
                out.insert(rel, Sha256::digest(fs::read(&path).unwrap()).to_vec());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

pub fn list_files(root: &Path) -> Vec<String> {
    tree_hashes(root).into_keys().collect()
}

const INGREDIENTS: [&str; 40] = [
    "egg", "flour", "sugar", "butter", "milk", "salt", "parmesan", "nutmeg", "truffle", "ham",
    "rigatoni", "bean", "crest", "chicken", "mushroom", "sweetbread", "bechamel", "lard", "onion",
    "carrot", "celery", "tomato", "pork", "beef", "veal", "rice", "semolina", "lemon", "almond",
    "honey", "yeast", "olive oil", "wine", "vinegar", "garlic", "parsley", "sage", "rosemary",
    "pepper", "cinnamon",
];
const COURSES: [&str; 4] = ["first", "second", "side", "dessert"];
const CITIES: [&str; 5] = ["Rimini", "Forlì", "Reggio Emilia", "Milano", "Cesenatico"];
const WORDS: [&str; 16] = [
    "pasticcio", "torta", "Éclair", "brodo", "zuppa", "crema", "ciambella", "sugo", "polenta",
    "tortellini", "3", "passatelli", "frittata", "àncora", "biscotti", "Ösel",
];

/// A random resolved corpus: up to `max_recipes` recipes with up to
/// `max_ingredients` ingredient uses each (duplicates allowed).
pub fn random_corpus<R: Rng>(rng: &mut R, max_recipes: usize, max_ingredients: usize) -> Vec<Cookbook> {
    let total = rng.gen_range(0..=max_recipes);
    let n_books = rng.gen_range(1..=6);
    let mut books: Vec<Cookbook> = (0..n_books)
        .map(|b| Cookbook {
            id: format!("book-{b}"),
            title: format!("Book {b}"),
            author: rng.gen_bool(0.8).then(|| format!("Author {}", rng.gen_range(0..4))),
            place: rng.gen_bool(0.85).then(|| CITIES.choose(rng).unwrap().to_string()),
            ..Cookbook::default()
        })
        .collect();
    for n in 0..total {
        let b = rng.gen_range(0..n_books);
        let title = format!(
            "{} {}",
            WORDS.choose(rng).unwrap(),
            WORDS.choose(rng).unwrap().to_lowercase()
        );
        let k = rng.gen_range(0..=max_ingredients);
        let ingredients = (0..k)
            .map(|_| {
                let name = INGREDIENTS.choose(rng).unwrap().to_string();
                IngredientUse {
                    raw_name: name.clone(),
                    canonical_name: name,
                    ..IngredientUse::default()
                }
            })
            .collect();
        let id = format!("{}/recipe-{n}", books[b].id);
        let cookbook_ref = books[b].title.clone();
        books[b].recipes.push(Recipe {
            id,
            title,
            cookbook_ref,
            course_type: rng.gen_bool(0.8).then(|| COURSES.choose(rng).unwrap().to_string()),
            ingredients,
            ..Recipe::default()
        });
    }
    books
}

pub const HEADER: &str = "Notebook\tFrom\tTo\tTime qualifier\tPlace\tRegion\tCountry\tAuthor surname name\tImg nome\tPag. numero\tTitle chapter\tTitle Recipe\tIngredient\tQuantity\tUnit\tCategory\tScope\tProcedure\tServes\tPreparation time\tCooking time\tTemperature";

/// Cities with coordinates in the fixture geography vocabulary.
const SYNTHETIC_CITIES: [(&str, &str); 4] = [
    ("Rimini", "Emilia Romagna"),
    ("Forlì", "Emilia Romagna"),
    ("Reggio Emilia", "Emilia Romagna"),
    ("Milano", "Lombardia"),
];

/// Ingredient spellings known to the fixture vocabulary, variants included.
const SYNTHETIC_INGREDIENTS: [&str; 22] = [
    "egg", "uova", "flour", "farina", "sugar", "butter", "burro", "parmesan", "parmigiano",
    "nutmeg", "truffle", "tartuffi", "ham", "rigatoni", "bean", "crest", "chicken (giblet)",
    "mushroom (dried)", "sweetbread", "bechamel", "maize flour", "sausage",
];
const SYNTHETIC_QUANTITIES: [(&str, &str); 6] = [
    ("500 g", ""),
    ("2", "hg"),
    ("1,5 hg", ""),
    ("", ""),
    ("n/s", ""),
    ("3", "spoon"),
];

/// A clean working table of `recipes` recipes spread over twelve cookbooks
/// and four cities, valid against the fixture vocabularies.
pub fn synthetic_table(recipes: usize, seed: u64) -> String {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from(HEADER);
    out.push('\n');
    for n in 0..recipes {
        let book = n % 12;
        let (city, region) = SYNTHETIC_CITIES[book % SYNTHETIC_CITIES.len()];
        let author = ["Dina", "Anna Maria Fiori", "Sara Fornaciari", "Ignota"][book % 4];
        let course = COURSES[rng.gen_range(0..COURSES.len())];
        let page = n / 12 + 1;
        let image = format!("Quaderno {book}_{city}_29ago2019_{page}.jpg");
        let title = format!("{} {n}", WORDS[rng.gen_range(0..WORDS.len())]);
        for _ in 0..rng.gen_range(1..=8) {
            let ingredient = SYNTHETIC_INGREDIENTS[rng.gen_range(0..SYNTHETIC_INGREDIENTS.len())];
            let (q, u) = SYNTHETIC_QUANTITIES[rng.gen_range(0..SYNTHETIC_QUANTITIES.len())];
            writeln!(
                out,
                "Quaderno {book}\t1950\t1960\tca\t{city}\t{region}\tItaly\t{author}\t{image}\t{page}\tCapitolo\t{title}\t{ingredient}\t{q}\t{u}\t{course}\tfamily\tboiling; in the oven\t4\tn/s\tn/s\tn/s"
            )
            .unwrap();
        }
    }
    out
}

/// Writes `table` next to a copy of the fixture vocabularies; returns
/// (table path, vocab dir).
pub fn write_inputs(dir: &Path, table: &str) -> (PathBuf, PathBuf) {
    let table_path = dir.join("table.tsv");
    fs::write(&table_path, table).unwrap();
    let vocab = dir.join("vocab");
    fs::create_dir_all(&vocab).unwrap();
    for entry in fs::read_dir(extract().vocab).unwrap() {
        let path = entry.unwrap().path();
        fs::copy(&path, vocab.join(path.file_name().unwrap())).unwrap();
    }
    (table_path, vocab)
}
