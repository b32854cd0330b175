//! Reset-splice laboratory.
//!
//! Builds small circuits, simulates them with readout and conditional-X
//! noise, splices many circuits into one task separated by resets, prices
//! tasks under per-shot, time-based and per-gate billing, and scans
//! instruction streams for spliced submissions.

pub mod analytics;
pub mod bench;
pub mod billing;
pub mod circuit;
pub mod counts;
pub mod fixtures;
pub mod guard;
pub mod metrics;
pub mod sim;
pub mod splice;
pub mod text;

pub use analytics::{effective_reset_fidelity, residual_after_k, ResetChannel};
pub use bench::{build, build_reset_test, generate_mix, BenchKind, MixSpec};
pub use billing::{price, savings, Currency, Exact, Money, PricingModel, TaskReceipt};
pub use circuit::{census, validate, BitRef, Circuit, GateCensus, Op};
pub use counts::CountsTable;
pub use guard::{audit, detect_full_reset_cuts, detect_repetition, quote_per_gate, AbuseFinding};
pub use metrics::{normalize, tvd, OutcomeDistribution};
pub use sim::{run_shots, NoiseModel, QubitNoise};
pub use splice::{splice, split_counts, SpliceMap, SpliceSpec};
pub use text::{parse, serialize};
