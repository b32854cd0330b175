//! Circuit concatenation with reset separators, and splitting of the
//! composite counts back into per-part tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;

use crate::circuit::{Circuit, Op};
use crate::counts::CountsTable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpliceError {
    #[error("splice needs at least one part")]
    NoParts,
    #[error("duplicate register '{0}' after relabeling")]
    DuplicateRegister(String),
    #[error("counts have {found} bits but the splice map covers {expected}")]
    WidthMismatch { found: usize, expected: usize },
    #[error("map line {line}: {message}")]
    MapFormat { line: usize, message: String },
}

#[derive(Debug, Clone)]
pub struct SpliceSpec {
    pub parts: Vec<Circuit>,
    /// Resets on every qubit between consecutive parts.
    pub resets: usize,
    /// Prefix registers of part `i` with `p<i>_`.
    pub relabel: bool,
}

impl SpliceSpec {
    pub fn new(parts: Vec<Circuit>, resets: usize) -> Self {
        SpliceSpec {
            parts,
            resets,
            relabel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartSpan {
    pub label: String,
    pub registers: Vec<String>,
    /// Character ranges of the composite bitstring, one per register.
    pub spans: Vec<Range<usize>>,
}

impl PartSpan {
    pub fn bit_count(&self) -> usize {
        self.spans.iter().map(|s| s.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpliceMap {
    pub parts: Vec<PartSpan>,
}

impl SpliceMap {
    /// Number of subcircuits executed per billed shot.
    pub fn effective_shots_factor(&self) -> u64 {
        self.parts.len() as u64
    }

    pub fn total_bits(&self) -> usize {
        self.parts.iter().map(PartSpan::bit_count).sum()
    }

    /// `PART_INDEX<TAB>LABEL<TAB>BITSPAN_LIST`, spans as half-open
    /// `start..end` joined by commas.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.parts.iter().enumerate() {
            let spans = p
                .spans
                .iter()
                .map(|s| format!("{}..{}", s.start, s.end))
                .collect::<Vec<_>>()
                .join(",");
            writeln!(out, "{i}\t{}\t{spans}", p.label).unwrap();
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<SpliceMap, SpliceError> {
        let mut parts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| SpliceError::MapFormat {
                line: i + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(err("expected 3 tab-separated fields"));
            }
            let index: usize = fields[0].parse().map_err(|_| err("bad part index"))?;
            if index != parts.len() {
                return Err(err("part indices must be consecutive from 0"));
            }
            let mut spans = Vec::new();
            for s in fields[2].split(',').filter(|s| !s.is_empty()) {
                let (a, b) = s.split_once("..").ok_or_else(|| err("bad span"))?;
                let a: usize = a.parse().map_err(|_| err("bad span start"))?;
                let b: usize = b.parse().map_err(|_| err("bad span end"))?;
                if b < a {
                    return Err(err("span end before start"));
                }
                spans.push(a..b);
            }
            parts.push(PartSpan {
                label: fields[1].to_string(),
                registers: Vec::new(),
                spans,
            });
        }
        Ok(SpliceMap { parts })
    }
}

/// Register name of part `index`'s register `name` in the composite.
pub fn relabeled(index: usize, name: &str) -> String {
    format!("p{index}_{name}")
}

/// Builds the composite circuit: parts in order, `resets` rounds of resets
/// on every composite qubit between consecutive parts, nothing before the
/// first or after the last. Width is the widest part.
///
/// A single part comes back unchanged, registers included.
pub fn splice(spec: &SpliceSpec) -> Result<(Circuit, SpliceMap), SpliceError> {
    let first = spec.parts.first().ok_or(SpliceError::NoParts)?;
    if spec.parts.len() == 1 {
        let mut offset = 0;
        let map = SpliceMap {
            parts: vec![part_span(
                first,
                first.label(),
                |n| n.to_string(),
                &mut offset,
            )],
        };
        return Ok((first.clone(), map));
    }

    let width = spec.parts.iter().map(Circuit::width).max().unwrap_or(1);
    let mut composite = Circuit::new(width);
    let mut parts = Vec::with_capacity(spec.parts.len());
    let mut offset = 0;

    for (i, part) in spec.parts.iter().enumerate() {
        let rename = |n: &str| {
            if spec.relabel {
                relabeled(i, n)
            } else {
                n.to_string()
            }
        };
        for r in part.cregs() {
            let name = rename(&r.name);
            composite
                .add_creg(&name, r.size)
                .map_err(|_| SpliceError::DuplicateRegister(name.clone()))?;
        }
        let label = if part.label().is_empty() {
            format!("part{i}")
        } else {
            part.label().to_string()
        };
        parts.push(part_span(part, &label, rename, &mut offset));
    }

    for (i, part) in spec.parts.iter().enumerate() {
        if i > 0 {
            for _ in 0..spec.resets {
                for q in 0..width {
                    composite.push(Op::Reset(q)).expect("qubit within width");
                }
            }
        }
        for op in part.ops() {
            let mut op = op.clone();
            if spec.relabel {
                if let Some(bit) = op.bit_mut() {
                    bit.register = relabeled(i, &bit.register);
                }
            }
            composite
                .push(op)
                .expect("part ops stay valid in a wider circuit");
        }
    }

    let label = spec
        .parts
        .iter()
        .map(|p| p.label())
        .collect::<Vec<_>>()
        .join("+");
    Ok((composite.with_label(label), SpliceMap { parts }))
}

fn part_span(
    part: &Circuit,
    label: &str,
    rename: impl Fn(&str) -> String,
    offset: &mut usize,
) -> PartSpan {
    let mut registers = Vec::new();
    let mut spans = Vec::new();
    for r in part.cregs() {
        registers.push(rename(&r.name));
        spans.push(*offset..*offset + r.size);
        *offset += r.size;
    }
    PartSpan {
        label: label.to_string(),
        registers,
        spans,
    }
}

/// Marginalizes the composite counts onto each part's bits. Every part table
/// totals the composite shot count.
pub fn split_counts(
    counts: &CountsTable,
    map: &SpliceMap,
) -> Result<Vec<CountsTable>, SpliceError> {
    let expected = map.total_bits();
    if let Some(found) = counts.bit_width() {
        if found != expected {
            return Err(SpliceError::WidthMismatch { found, expected });
        }
    }
    let mut out: Vec<BTreeMap<String, u64>> = vec![BTreeMap::new(); map.parts.len()];
    for (bits, n) in counts.iter() {
        for (p, acc) in map.parts.iter().zip(out.iter_mut()) {
            let key: String = p.spans.iter().map(|s| &bits[s.clone()]).collect();
            *acc.entry(key).or_insert(0) += n;
        }
    }
    Ok(out
        .into_iter()
        .map(|m| CountsTable::from_map(m).expect("marginals of a valid table are valid"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    fn bell() -> Circuit {
        parse("qubits 2\ncreg c 2\nh 0\ncx 0 1\nmeasure 0 -> c[0]\nmeasure 1 -> c[1]\n")
            .unwrap()
            .with_label("bell")
    }

    fn one_qubit() -> Circuit {
        parse("qubits 1\ncreg out 1\nx 0\nmeasure 0 -> out[0]\n")
            .unwrap()
            .with_label("flip")
    }

    #[test]
    fn eight_bells_four_resets() {
        let (c, map) = splice(&SpliceSpec::new(vec![bell(); 8], 4)).unwrap();
        assert_eq!(c.width(), 2);
        assert_eq!(c.census().n_reset, 56);
        assert_eq!(c.cregs().len(), 8);
        assert_eq!(c.cregs()[3].name, "p3_c");
        assert_eq!(map.effective_shots_factor(), 8);
        assert_eq!(map.parts[7].spans, vec![14..16]);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn single_part_is_identity() {
        let (c, map) = splice(&SpliceSpec::new(vec![bell()], 7)).unwrap();
        assert_eq!(c, bell());
        assert_eq!(map.parts.len(), 1);
        let mut t = CountsTable::new();
        t.add("00", 3);
        t.add("11", 2);
        assert_eq!(split_counts(&t, &map).unwrap(), vec![t]);
    }

    #[test]
    fn mixed_widths_reset_every_qubit() {
        let (c, _) = splice(&SpliceSpec::new(vec![one_qubit(), bell(), one_qubit()], 1)).unwrap();
        assert_eq!(c.width(), 2);
        // 2 separators × 1 round × 2 qubits
        assert_eq!(c.census().n_reset, 4);
        let resets: Vec<_> = c
            .ops()
            .iter()
            .filter(|o| matches!(o, Op::Reset(_)))
            .collect();
        assert_eq!(
            resets,
            vec![&Op::Reset(0), &Op::Reset(1), &Op::Reset(0), &Op::Reset(1)]
        );
        assert!(!matches!(c.ops()[0], Op::Reset(_)));
        assert!(!matches!(c.ops().last().unwrap(), Op::Reset(_)));
    }

    #[test]
    fn census_is_additive_plus_separators() {
        let parts = vec![bell(), one_qubit(), bell()];
        let k = 3;
        let (c, _) = splice(&SpliceSpec::new(parts.clone(), k)).unwrap();
        let got = c.census();
        let sum = parts
            .iter()
            .map(Circuit::census)
            .fold(crate::circuit::GateCensus::default(), |a, b| a + b);
        assert_eq!(got.n_1q, sum.n_1q);
        assert_eq!(got.n_2q, sum.n_2q);
        assert_eq!(got.n_meas, sum.n_meas);
        assert_eq!(
            got.n_reset,
            sum.n_reset + ((parts.len() - 1) * k * 2) as u64
        );
    }

    #[test]
    fn duplicate_register_without_relabel() {
        let mut spec = SpliceSpec::new(vec![bell(), bell()], 1);
        spec.relabel = false;
        assert_eq!(
            splice(&spec).unwrap_err(),
            SpliceError::DuplicateRegister("c".into())
        );
    }

    #[test]
    fn no_parts() {
        assert_eq!(
            splice(&SpliceSpec::new(vec![], 1)).unwrap_err(),
            SpliceError::NoParts
        );
    }

    #[test]
    fn split_two_parts() {
        let (_, map) = splice(&SpliceSpec::new(vec![bell(), bell()], 1)).unwrap();
        let mut t = CountsTable::new();
        t.add("0011", 400);
        t.add("1100", 350);
        t.add("1111", 250);
        let parts = split_counts(&t, &map).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.shots() == 1000));
        assert_eq!(parts.iter().map(|p| p.shots()).sum::<u64>(), 2000);
        assert_eq!(parts[0].get("00"), 400);
        assert_eq!(parts[0].get("11"), 600);
        assert_eq!(parts[1].get("11"), 650);
    }

    #[test]
    fn split_width_mismatch() {
        let (_, map) = splice(&SpliceSpec::new(vec![bell(), bell()], 1)).unwrap();
        let mut t = CountsTable::new();
        t.add("001", 1);
        assert_eq!(
            split_counts(&t, &map).unwrap_err(),
            SpliceError::WidthMismatch {
                found: 3,
                expected: 4
            }
        );
    }

    #[test]
    fn map_sidecar_round_trip() {
        let (_, map) = splice(&SpliceSpec::new(vec![bell(), one_qubit()], 2)).unwrap();
        let text = map.to_text();
        assert_eq!(text, "0\tbell\t0..2\n1\tflip\t2..3\n");
        let back = SpliceMap::parse_text(&text).unwrap();
        assert_eq!(
            back.parts.iter().map(|p| &p.spans).collect::<Vec<_>>(),
            map.parts.iter().map(|p| &p.spans).collect::<Vec<_>>()
        );
        assert!(SpliceMap::parse_text("1\tx\t0..1\n").is_err());
        assert!(SpliceMap::parse_text("0\tx\t3..1\n").is_err());
    }
}
