use std::fs;
use std::path::PathBuf;

use elemdoc::fixtures::corpus_files;
use elemdoc::format::{load_model, load_morphism, load_theory, print_model, print_morphism, print_theory};
use elemdoc_core::semantics::check_model;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn fixtures_match_corpus() {
    let bless = std::env::var_os("ELEMDOC_BLESS").is_some();
    for (name, text) in corpus_files() {
        let path = dir().join(&name);
        if bless {
            fs::write(&path, &text).unwrap();
        }
        let on_disk = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(on_disk, text, "{name} is stale");
    }
}

#[test]
fn fixtures_round_trip_byte_exact() {
    for (name, text) in corpus_files() {
        let path = dir().join(&name);
        let printed = match path.extension().and_then(|e| e.to_str()) {
            Some("thy") => print_theory(&load_theory(&path).unwrap()),
            Some("mor") => print_morphism(&load_morphism(&path).unwrap()),
            Some("mod") => print_model(&load_model(&path).unwrap().0),
            _ => unreachable!(),
        };
        assert_eq!(printed, text, "{name}");
    }
}

#[test]
fn fixture_models_satisfy_their_theories() {
    for (name, _) in corpus_files().into_iter().filter(|(n, _)| n.ends_with(".mod")) {
        let (m, t) = load_model(&dir().join(&name)).unwrap();
        let r = check_model(&m.model, &t);
        assert!(r.is_empty(), "{name}: {r}");
    }
}

#[test]
fn loaded_morphisms_equal_corpus() {
    for e in elemdoc_core::corpus::morphisms() {
        let path = dir().join(format!("{}.mor", elemdoc::fixtures::file_stem(&e.name)));
        assert_eq!(load_morphism(&path).unwrap().morphism, e);
    }
}
