//! Per-gate quoting and static heuristics for spotting spliced tasks.
//!
//! Everything here reads the instruction stream only. A circuit that returns
//! its qubits to |0⟩ by uncomputing instead of resetting passes unnoticed;
//! [`uncomputation_evasion`] builds one.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Range;

use crate::billing::{price, BillingError, Exact, Money, PricingModel, TaskReceipt};
use crate::circuit::{BitRef, Circuit, Op};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GuardError {
    #[error("per-gate quote needs a per_gate model, got {0}")]
    NotPerGate(&'static str),
    #[error("threshold must be non-negative")]
    NegativeThreshold,
    #[error(transparent)]
    Billing(#[from] BillingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingKind {
    FullResetCut,
    RepeatedSegment,
    UnderpricedTask,
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FindingKind::FullResetCut => "FullResetCut",
            FindingKind::RepeatedSegment => "RepeatedSegment",
            FindingKind::UnderpricedTask => "UnderpricedTask",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbuseFinding {
    pub kind: FindingKind,
    /// Op-index range the finding refers to.
    pub span: Range<usize>,
    pub note: String,
    /// Segments the circuit splits into for a cut, copies for a repeated
    /// segment, 1 for a pricing finding.
    pub segments: usize,
}

impl AbuseFinding {
    /// `KIND<TAB>SPAN<TAB>DETAIL`.
    pub fn report_line(&self) -> String {
        format!(
            "{}\t{}..{}\t{}",
            self.kind, self.span.start, self.span.end, self.note
        )
    }
}

impl fmt::Display for AbuseFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report_line())
    }
}

/// Pre-execution price of `c` under a per-gate model.
pub fn quote_per_gate(c: &Circuit, model: &PricingModel) -> Result<Money, GuardError> {
    if !matches!(model, PricingModel::PerGate { .. }) {
        return Err(GuardError::NotPerGate(model.kind()));
    }
    let receipt = TaskReceipt::new(1, 0, c.census(), 1);
    Ok(price(model, &receipt)?)
}

/// Windows where every qubit is reset: maximal runs of consecutive
/// Reset/Barrier ops whose resets cover the whole width. Spans run from the
/// first to the last reset of the run.
fn reset_windows(c: &Circuit) -> Vec<Range<usize>> {
    let ops = c.ops();
    let mut windows = Vec::new();
    let mut i = 0;
    while i < ops.len() {
        if !matches!(ops[i], Op::Reset(_) | Op::Barrier(_)) {
            i += 1;
            continue;
        }
        let mut covered = BTreeSet::new();
        let (mut first, mut last) = (None, 0);
        let mut j = i;
        while j < ops.len() {
            match ops[j] {
                Op::Reset(q) => {
                    covered.insert(q);
                    first.get_or_insert(j);
                    last = j;
                }
                Op::Barrier(_) => {}
                _ => break,
            }
            j += 1;
        }
        if let Some(first) = first {
            if covered.len() == c.width() {
                windows.push(first..last + 1);
            }
        }
        i = j;
    }
    windows
}

pub fn detect_full_reset_cuts(c: &Circuit) -> Vec<AbuseFinding> {
    let windows = reset_windows(c);
    let segments = windows.len() + 1;
    windows
        .iter()
        .enumerate()
        .map(|(i, w)| AbuseFinding {
            kind: FindingKind::FullResetCut,
            span: w.clone(),
            note: format!(
                "all {} qubits reset ({} resets); cut {} of {}, {} segments",
                c.width(),
                w.len(),
                i + 1,
                windows.len(),
                segments
            ),
            segments,
        })
        .collect()
}

/// Op ranges between full-reset windows.
fn segments(c: &Circuit) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for w in reset_windows(c) {
        out.push(start..w.start);
        start = w.end;
    }
    out.push(start..c.ops().len());
    out
}

/// Segment text with register names replaced by their order of first use.
fn canonical(ops: &[Op]) -> String {
    let mut names: BTreeMap<String, usize> = BTreeMap::new();
    let mut text = String::new();
    for op in ops {
        let mut op = op.clone();
        if matches!(op, Op::Barrier(_)) {
            continue;
        }
        if let Some(bit) = op.bit_mut() {
            let next = names.len();
            let id = *names.entry(bit.register.clone()).or_insert(next);
            *bit = BitRef::new(format!("r{id}"), bit.index);
        }
        text.push_str(&format!("{op:?};"));
    }
    text
}

pub fn detect_repetition(c: &Circuit) -> Vec<AbuseFinding> {
    let segs = segments(c);
    let mut groups: BTreeMap<String, Vec<Range<usize>>> = BTreeMap::new();
    for s in segs {
        let key = canonical(&c.ops()[s.clone()]);
        if key.is_empty() {
            continue;
        }
        groups.entry(key).or_default().push(s);
    }
    let mut found: Vec<AbuseFinding> = groups
        .into_iter()
        .filter(|(_, spans)| spans.len() >= 2)
        .map(|(key, spans)| {
            let mut h = DefaultHasher::new();
            key.hash(&mut h);
            let starts: Vec<String> = spans.iter().map(|s| s.start.to_string()).collect();
            AbuseFinding {
                kind: FindingKind::RepeatedSegment,
                span: spans[0].start..spans[spans.len() - 1].end,
                note: format!(
                    "segment {:016x} repeats {} times (starts at ops {})",
                    h.finish(),
                    spans.len(),
                    starts.join(",")
                ),
                segments: spans.len(),
            }
        })
        .collect();
    found.sort_by_key(|f| f.span.start);
    found
}

/// Both structural detectors, cuts first.
pub fn scan(c: &Circuit) -> Vec<AbuseFinding> {
    let mut out = detect_full_reset_cuts(c);
    out.extend(detect_repetition(c));
    out
}

/// Audit threshold used when none is configured.
pub fn default_threshold() -> Exact {
    Exact::new(1, 2)
}

/// Flags a task billed below `threshold × quote_per_gate(c, fair)`.
/// A zero threshold never fires.
pub fn audit(
    c: &Circuit,
    billed: Money,
    fair: &PricingModel,
    threshold: Exact,
) -> Result<Vec<AbuseFinding>, GuardError> {
    if threshold < Exact::from_integer(0) {
        return Err(GuardError::NegativeThreshold);
    }
    let quote = quote_per_gate(c, fair)?;
    if billed.currency() != quote.currency() {
        return Err(BillingError::CurrencyMismatch(billed.currency(), quote.currency()).into());
    }
    if threshold == Exact::from_integer(0) {
        return Ok(Vec::new());
    }
    let floor = quote.as_exact() * threshold;
    if billed.as_exact() >= floor {
        return Ok(Vec::new());
    }
    Ok(vec![AbuseFinding {
        kind: FindingKind::UnderpricedTask,
        span: 0..c.ops().len(),
        note: format!(
            "billed {} {} below {} of per-gate quote {} {}",
            billed.format_trimmed(2),
            billed.currency(),
            crate::billing::format_exact(&threshold, 2),
            quote.format_trimmed(2),
            quote.currency()
        ),
        segments: 1,
    }])
}

/// `parts` classical sub-computations sharing two working qubits. Each one
/// computes into the working pair, copies the result to its own ancilla and
/// uncomputes, leaving the pair in |00⟩ without any Reset.
pub fn uncomputation_evasion(parts: usize) -> Circuit {
    assert!(parts >= 1, "at least one part");
    let mut c = Circuit::new(2 + parts).with_label("uncomputation");
    c.add_creg("c", parts).expect("fresh register");
    c.add_creg("w", 2).expect("fresh register");
    for i in 0..parts {
        let anc = 2 + i;
        for op in [
            Op::X(0),
            Op::Cx {
                control: 0,
                target: 1,
            },
            Op::Cx {
                control: 1,
                target: anc,
            },
            Op::Cx {
                control: 0,
                target: 1,
            },
            Op::X(0),
        ] {
            c.push(op).expect("qubits within width");
        }
    }
    for i in 0..parts {
        c.push(Op::Measure {
            qubit: 2 + i,
            bit: BitRef::new("c", i),
        })
        .expect("declared bit");
    }
    for q in 0..2 {
        c.push(Op::Measure {
            qubit: q,
            bit: BitRef::new("w", q),
        })
        .expect("declared bit");
    }
    c
}
