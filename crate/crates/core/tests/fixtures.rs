//! The checked-in fixture tree must equal what the builders produce, and
//! every circuit in it must survive a parse/serialize round trip.
//!
//! `RESETLAB_BLESS=1 cargo test --test fixtures` rewrites the tree.

use std::fs;
use std::path::{Path, PathBuf};

use resetlab::fixtures;
use resetlab::splice::SpliceMap;
use resetlab::text::{parse, serialize};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn tree_matches_generators() {
    let bless = std::env::var_os("RESETLAB_BLESS").is_some();
    let mut stale = Vec::new();
    for f in fixtures::all() {
        let path = root().join(&f.path);
        if bless {
            fs::create_dir_all(path.parent().unwrap()).unwrap();
            fs::write(&path, &f.contents).unwrap();
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(text) if text == f.contents => {}
            _ => stale.push(f.path),
        }
    }
    assert!(
        stale.is_empty(),
        "stale fixtures (rerun with RESETLAB_BLESS=1): {stale:?}"
    );
}

#[test]
fn circuits_round_trip() {
    let mut seen = 0;
    for f in fixtures::all().iter().filter(|f| f.path.ends_with(".qct")) {
        let text = fs::read_to_string(root().join(&f.path)).unwrap();
        let c = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", f.path));
        let again = parse(&serialize(&c)).unwrap();
        assert!(c.structurally_eq(&again), "{}", f.path);
        assert_eq!(serialize(&again), text, "{}", f.path);
        seen += 1;
    }
    // 10 benchmarks, 3 reset tests, the evasion circuit, 10 mixes
    assert_eq!(seen, 24);
}

#[test]
fn mix_maps_cover_composite_bits() {
    for name in resetlab::bench::preset_names() {
        let qct = fs::read_to_string(root().join(format!("mixes/{name}.qct"))).unwrap();
        let map = fs::read_to_string(root().join(format!("mixes/{name}.map"))).unwrap();
        let c = parse(&qct).unwrap();
        let map = SpliceMap::parse_text(&map).unwrap();
        assert_eq!(map.total_bits(), c.num_clbits(), "{name}");
        let list = fs::read_to_string(root().join(format!("mixes/{name}.list"))).unwrap();
        assert_eq!(map.parts.len(), list.lines().count(), "{name}");
    }
}
