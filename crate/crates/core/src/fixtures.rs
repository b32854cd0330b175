//! The shipped fixture tree, generated from the circuit builders.
//!
//! ```text
//! circuits/<name>.qct         benchmark and reset-test circuits
//! circuits/uncomputation.qct  reset-free splice the detectors miss
//! mixes/<mix>.list            circuit names of each mix, in order
//! mixes/<mix>.qct, .map       the mix spliced with 4 resets
//! receipts/<set>.csv          recorded runs of the evaluated machine
//! ```

use crate::bench::{self, BenchKind};
use crate::guard;
use crate::splice::{splice, SpliceSpec};
use crate::text::serialize;

/// Resets between parts in the shipped mix composites.
pub const MIX_RESETS: usize = 4;

/// Reset-test depths with shipped circuits.
pub const RESET_TEST_DEPTHS: [usize; 3] = [1, 6, 31];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    /// Path relative to the fixture root, `/`-separated.
    pub path: String,
    pub contents: String,
}

fn fixture(path: impl Into<String>, contents: impl Into<String>) -> Fixture {
    Fixture {
        path: path.into(),
        contents: contents.into(),
    }
}

/// Circuit kinds with a standalone fixture.
pub fn benchmark_kinds() -> Vec<BenchKind> {
    let mut kinds = bench::mix_pool();
    kinds.push(BenchKind::deutsch_jozsa(false));
    kinds
}

/// Circuit slugs of a mix, one per line.
fn list_text(kinds: &[BenchKind]) -> String {
    kinds.iter().map(|k| format!("{}\n", k.slug())).collect()
}

pub fn all() -> Vec<Fixture> {
    let mut out = Vec::new();
    for kind in benchmark_kinds() {
        let c = bench::build(&kind).expect("default parameters are in range");
        out.push(fixture(
            format!("circuits/{}.qct", kind.slug()),
            serialize(&c),
        ));
    }
    for k in RESET_TEST_DEPTHS {
        let c = bench::build_reset_test(k).expect("depth in range");
        out.push(fixture(
            format!("circuits/reset_test_{k}.qct"),
            serialize(&c),
        ));
    }
    out.push(fixture(
        "circuits/uncomputation.qct",
        serialize(&guard::uncomputation_evasion(4)),
    ));
    for name in bench::preset_names() {
        let kinds = bench::preset_mix(name).expect("shipped preset");
        let parts = kinds
            .iter()
            .map(|k| bench::build(k).expect("default parameters are in range"))
            .collect();
        let (c, map) = splice(&SpliceSpec::new(parts, MIX_RESETS)).expect("presets splice");
        out.push(fixture(format!("mixes/{name}.list"), list_text(&kinds)));
        out.push(fixture(format!("mixes/{name}.qct"), serialize(&c)));
        out.push(fixture(format!("mixes/{name}.map"), map.to_text()));
    }
    out.push(fixture("receipts/bell_copies.csv", BELL_COPIES));
    out.push(fixture("receipts/bell_resets.csv", BELL_RESETS));
    out.push(fixture("receipts/mix4.csv", MIX4));
    out.push(fixture("receipts/mixes.csv", MIXES));
    out
}

/// Spliced Bell copies, 4 resets, 1000 shots.
pub const BELL_COPIES: &str = "\
label,parts,resets,shots,wall_time_s
bell_x1,1,4,1000,2
bell_x2,2,4,1000,2
bell_x4,4,4,1000,3
bell_x8,8,4,1000,3
bell_x16,16,4,1000,4
bell_x32,32,4,1000,6
bell_x64,64,4,1000,14
";

/// Eight spliced Bell copies with varying resets between them.
pub const BELL_RESETS: &str = "\
label,parts,resets,shots,wall_time_s
bell_x8_k1,8,1,1000,3
bell_x8_k2,8,2,1000,3
bell_x8_k4,8,4,1000,3
bell_x8_k8a,8,8,1000,3
bell_x8_k8b,8,8,1000,4
bell_x8_k8c,8,8,1000,4
bell_x8_k16,8,16,1000,6
bell_x8_k32,8,32,1000,14
";

/// Four-circuit mixes, 4 resets.
pub const MIX4: &str = "\
label,parts,resets,shots,wall_time_s
mix4a,4,4,1000,3
mix4b,4,4,1000,3
mix4c,4,4,1000,3
mix4d,4,4,1000,3
";

/// Larger random mixes, 4 resets.
pub const MIXES: &str = "\
label,parts,resets,shots,wall_time_s
mix8,8,4,1000,3
mix16,16,4,1000,4
mix32,32,4,1000,7
mix48,48,4,1000,11
mix64,64,4,1000,16
mix80,80,4,1000,27
";
