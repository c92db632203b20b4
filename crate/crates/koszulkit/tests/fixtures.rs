//! The checked-in `.kz` files must match the corpus. Set `KOSZULKIT_BLESS=1` to rewrite them.

use std::path::PathBuf;

use koszulkit::corpus;
use koszulkit::io::{load, Loaded};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn fixtures_match_the_corpus() {
    let bless = std::env::var_os("KOSZULKIT_BLESS").is_some();
    for e in corpus::entries() {
        let path = dir().join(format!("{}.kz", e.name));
        let text = corpus::document(&e).to_text();
        if bless {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|err| panic!("{}: {err}", path.display()));
        assert_eq!(on_disk, text, "{} is stale; rerun with KOSZULKIT_BLESS=1", path.display());
    }
}

#[test]
fn fixtures_load_to_the_corpus_values() {
    for e in corpus::entries() {
        let doc = load(&dir().join(format!("{}.kz", e.name))).unwrap();
        let loaded = doc.presentation().unwrap();
        match &e.presentation {
            corpus::CorpusPresentation::Quadratic(q) => assert_eq!(loaded, Loaded::Quadratic(q.clone())),
            corpus::CorpusPresentation::Nonhomogeneous(p) => assert_eq!(loaded, Loaded::Nonhomogeneous(p.clone())),
        }
        assert_eq!(doc.metadata["name"], e.name);
    }
}
