//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of [`Op`]s over `width` qubits plus a set
//! of named classical registers. Qubit `q` maps to bit `q` of a basis-state
//! index (little-endian, the usual Qiskit convention).
//!
//! `Reset` stays a primitive here so that billing and the abuse detectors can
//! see it; the simulator expands it into a hidden measurement followed by a
//! classically conditioned X.

use std::collections::HashSet;
use std::fmt;
use std::ops::Add;

/// A single classical bit, addressed as `register[index]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRef {
    pub register: String,
    pub index: usize,
}

impl BitRef {
    pub fn new(register: impl Into<String>, index: usize) -> Self {
        BitRef {
            register: register.into(),
            index,
        }
    }
}

impl fmt::Display for BitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.register, self.index)
    }
}

/// One instruction of a circuit. Angles are radians.
#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    H(usize),
    X(usize),
    Rz {
        theta: f64,
        qubit: usize,
    },
    U3 {
        theta: f64,
        phi: f64,
        lambda: f64,
        qubit: usize,
    },
    Cx {
        control: usize,
        target: usize,
    },
    Cu3 {
        theta: f64,
        phi: f64,
        lambda: f64,
        control: usize,
        target: usize,
    },
    Measure {
        qubit: usize,
        bit: BitRef,
    },
    Reset(usize),
    /// X on `qubit` when the classical bit currently holds 1.
    CondX {
        bit: BitRef,
        qubit: usize,
    },
    /// Empty list means every qubit.
    Barrier(Vec<usize>),
}

impl Op {
    /// Qubits the operation touches. For a barrier this is the explicit list.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Op::H(q) | Op::X(q) | Op::Reset(q) => vec![*q],
            Op::Rz { qubit, .. }
            | Op::U3 { qubit, .. }
            | Op::Measure { qubit, .. }
            | Op::CondX { qubit, .. } => vec![*qubit],
            Op::Cx { control, target }
            | Op::Cu3 {
                control, target, ..
            } => {
                vec![*control, *target]
            }
            Op::Barrier(qs) => qs.clone(),
        }
    }

    pub fn bit(&self) -> Option<&BitRef> {
        match self {
            Op::Measure { bit, .. } | Op::CondX { bit, .. } => Some(bit),
            _ => None,
        }
    }

    pub(crate) fn bit_mut(&mut self) -> Option<&mut BitRef> {
        match self {
            Op::Measure { bit, .. } | Op::CondX { bit, .. } => Some(bit),
            _ => None,
        }
    }

    fn angles(&self) -> Vec<f64> {
        match self {
            Op::Rz { theta, .. } => vec![*theta],
            Op::U3 {
                theta, phi, lambda, ..
            }
            | Op::Cu3 {
                theta, phi, lambda, ..
            } => vec![*theta, *phi, *lambda],
            _ => Vec::new(),
        }
    }

    pub fn is_unitary(&self) -> bool {
        matches!(
            self,
            Op::H(_) | Op::X(_) | Op::Rz { .. } | Op::U3 { .. } | Op::Cx { .. } | Op::Cu3 { .. }
        )
    }

    /// Same op with angles compared to within `tol` radians.
    pub fn approx_eq(&self, other: &Op, tol: f64) -> bool {
        let strip = |op: &Op| -> Op {
            let mut op = op.clone();
            match &mut op {
                Op::Rz { theta, .. } => *theta = 0.0,
                Op::U3 {
                    theta, phi, lambda, ..
                }
                | Op::Cu3 {
                    theta, phi, lambda, ..
                } => {
                    *theta = 0.0;
                    *phi = 0.0;
                    *lambda = 0.0;
                }
                _ => {}
            }
            op
        };
        strip(self) == strip(other)
            && self
                .angles()
                .iter()
                .zip(other.angles())
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalRegister {
    pub name: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    ZeroWidth,
    QubitOutOfRange { qubit: usize },
    RepeatedQubit { qubit: usize },
    UndeclaredRegister { register: String },
    BitOutOfRange { bit: BitRef, size: usize },
    NonFiniteAngle,
    DuplicateRegister { register: String },
    EmptyRegister { register: String },
    InvalidRegisterName { register: String },
}

/// One broken invariant. `op_index` is `None` for declaration-level problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub op_index: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            ViolationKind::ZeroWidth => "circuit width must be at least 1".to_string(),
            ViolationKind::QubitOutOfRange { qubit } => format!("qubit out of range ({qubit})"),
            ViolationKind::RepeatedQubit { qubit } => format!("qubit {qubit} used twice"),
            ViolationKind::UndeclaredRegister { register } => {
                format!("undeclared register '{register}'")
            }
            ViolationKind::BitOutOfRange { bit, size } => {
                format!("bit out of range: {bit} (register size {size})")
            }
            ViolationKind::NonFiniteAngle => "angle is not finite".to_string(),
            ViolationKind::DuplicateRegister { register } => {
                format!("duplicate register '{register}'")
            }
            ViolationKind::EmptyRegister { register } => {
                format!("register '{register}' has size 0")
            }
            ViolationKind::InvalidRegisterName { register } => {
                format!("invalid register name '{register}'")
            }
        };
        match self.op_index {
            Some(i) => write!(f, "{what} at op {i}"),
            None => f.write_str(&what),
        }
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    cregs: Vec<ClassicalRegister>,
    ops: Vec<Op>,
    label: String,
}

impl Circuit {
    /// Empty circuit. Panics on zero width; use [`Circuit::from_parts`] for
    /// untrusted input.
    pub fn new(width: usize) -> Self {
        assert!(width >= 1, "circuit width must be at least 1");
        Circuit {
            width,
            cregs: Vec::new(),
            ops: Vec::new(),
            label: String::new(),
        }
    }

    /// Builds a circuit and checks every invariant.
    pub fn from_parts(
        width: usize,
        cregs: Vec<ClassicalRegister>,
        ops: Vec<Op>,
        label: impl Into<String>,
    ) -> Result<Self, Vec<Violation>> {
        let c = Circuit {
            width,
            cregs,
            ops,
            label: label.into(),
        };
        validate_parts(c.width, &c.cregs, &c.ops)?;
        Ok(c)
    }

    /// Builds a circuit without checking it. Only for feeding [`validate`]
    /// or for tests that need a malformed circuit.
    pub fn from_parts_unchecked(
        width: usize,
        cregs: Vec<ClassicalRegister>,
        ops: Vec<Op>,
        label: impl Into<String>,
    ) -> Self {
        Circuit {
            width,
            cregs,
            ops,
            label: label.into(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn add_creg(&mut self, name: &str, size: usize) -> Result<(), Violation> {
        let kind = if !is_identifier(name) {
            Some(ViolationKind::InvalidRegisterName {
                register: name.to_string(),
            })
        } else if size == 0 {
            Some(ViolationKind::EmptyRegister {
                register: name.to_string(),
            })
        } else if self.creg(name).is_some() {
            Some(ViolationKind::DuplicateRegister {
                register: name.to_string(),
            })
        } else {
            None
        };
        if let Some(kind) = kind {
            return Err(Violation {
                op_index: None,
                kind,
            });
        }
        self.cregs.push(ClassicalRegister {
            name: name.to_string(),
            size,
        });
        Ok(())
    }

    /// Appends `op` if its indices resolve against this circuit.
    pub fn push(&mut self, op: Op) -> Result<(), Violation> {
        if let Some(kind) = check_op(self.width, &self.cregs, &op) {
            return Err(Violation {
                op_index: Some(self.ops.len()),
                kind,
            });
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn cregs(&self) -> &[ClassicalRegister] {
        &self.cregs
    }

    pub fn creg(&self, name: &str) -> Option<&ClassicalRegister> {
        self.cregs.iter().find(|r| r.name == name)
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Total number of declared classical bits.
    pub fn num_clbits(&self) -> usize {
        self.cregs.iter().map(|r| r.size).sum()
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        validate_parts(self.width, &self.cregs, &self.ops)
    }

    pub fn census(&self) -> GateCensus {
        census(self)
    }

    /// Equal up to the label, with angles compared to within `1e-11`.
    /// Serialized angles carry 12 decimals, so this is the equality that
    /// survives a text round trip.
    pub fn structurally_eq(&self, other: &Circuit) -> bool {
        self.width == other.width
            && self.cregs == other.cregs
            && self.ops.len() == other.ops.len()
            && self
                .ops
                .iter()
                .zip(&other.ops)
                .all(|(a, b)| a.approx_eq(b, 1e-11))
    }
}

fn check_op(width: usize, cregs: &[ClassicalRegister], op: &Op) -> Option<ViolationKind> {
    let qubits = op.qubits();
    if let Some(&q) = qubits.iter().find(|&&q| q >= width) {
        return Some(ViolationKind::QubitOutOfRange { qubit: q });
    }
    let mut seen = HashSet::new();
    if let Some(&q) = qubits.iter().find(|&&q| !seen.insert(q)) {
        return Some(ViolationKind::RepeatedQubit { qubit: q });
    }
    if op.angles().iter().any(|a| !a.is_finite()) {
        return Some(ViolationKind::NonFiniteAngle);
    }
    if let Some(bit) = op.bit() {
        match cregs.iter().find(|r| r.name == bit.register) {
            None => {
                return Some(ViolationKind::UndeclaredRegister {
                    register: bit.register.clone(),
                })
            }
            Some(r) if bit.index >= r.size => {
                return Some(ViolationKind::BitOutOfRange {
                    bit: bit.clone(),
                    size: r.size,
                })
            }
            Some(_) => {}
        }
    }
    None
}

fn validate_parts(
    width: usize,
    cregs: &[ClassicalRegister],
    ops: &[Op],
) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    if width == 0 {
        violations.push(Violation {
            op_index: None,
            kind: ViolationKind::ZeroWidth,
        });
    }
    let mut names = HashSet::new();
    for r in cregs {
        let kind = if !is_identifier(&r.name) {
            Some(ViolationKind::InvalidRegisterName {
                register: r.name.clone(),
            })
        } else if r.size == 0 {
            Some(ViolationKind::EmptyRegister {
                register: r.name.clone(),
            })
        } else if !names.insert(r.name.as_str()) {
            Some(ViolationKind::DuplicateRegister {
                register: r.name.clone(),
            })
        } else {
            None
        };
        if let Some(kind) = kind {
            violations.push(Violation {
                op_index: None,
                kind,
            });
        }
    }
    for (i, op) in ops.iter().enumerate() {
        if let Some(kind) = check_op(width, cregs, op) {
            violations.push(Violation {
                op_index: Some(i),
                kind,
            });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Every invariant violation of `c`, each tagged with its op index.
pub fn validate(c: &Circuit) -> Result<(), Vec<Violation>> {
    c.validate()
}

/// Operation counts and depth of a circuit.
///
/// `CondX` counts as a single-qubit gate. `Reset` is one primitive and is not
/// expanded. Depth is the longest per-qubit chain over gates and resets;
/// measurements and barriers add no depth.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct GateCensus {
    pub n_1q: u64,
    pub n_2q: u64,
    pub n_meas: u64,
    pub n_reset: u64,
    pub depth: u64,
}

impl GateCensus {
    pub fn total_ops(&self) -> u64 {
        self.n_1q + self.n_2q + self.n_meas + self.n_reset
    }
}

/// Fieldwise sum; depths add, which is an upper bound on the depth of the
/// concatenated circuit.
impl Add for GateCensus {
    type Output = GateCensus;

    fn add(self, rhs: GateCensus) -> GateCensus {
        GateCensus {
            n_1q: self.n_1q + rhs.n_1q,
            n_2q: self.n_2q + rhs.n_2q,
            n_meas: self.n_meas + rhs.n_meas,
            n_reset: self.n_reset + rhs.n_reset,
            depth: self.depth + rhs.depth,
        }
    }
}

pub fn census(c: &Circuit) -> GateCensus {
    let mut out = GateCensus::default();
    let mut level = vec![0u64; c.width()];
    for op in c.ops() {
        match op {
            Op::H(q) | Op::X(q) | Op::Rz { qubit: q, .. } | Op::U3 { qubit: q, .. } => {
                out.n_1q += 1;
                level[*q] += 1;
            }
            Op::CondX { qubit, .. } => {
                out.n_1q += 1;
                level[*qubit] += 1;
            }
            Op::Cx { control, target }
            | Op::Cu3 {
                control, target, ..
            } => {
                out.n_2q += 1;
                let l = level[*control].max(level[*target]) + 1;
                level[*control] = l;
                level[*target] = l;
            }
            Op::Measure { .. } => out.n_meas += 1,
            Op::Reset(q) => {
                out.n_reset += 1;
                level[*q] += 1;
            }
            Op::Barrier(_) => {}
        }
    }
    out.depth = level.into_iter().max().unwrap_or(0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> Circuit {
        let mut c = Circuit::new(2);
        c.add_creg("c", 2).unwrap();
        c.push(Op::H(0)).unwrap();
        c.push(Op::Cx {
            control: 0,
            target: 1,
        })
        .unwrap();
        c.push(Op::Measure {
            qubit: 0,
            bit: BitRef::new("c", 0),
        })
        .unwrap();
        c.push(Op::Measure {
            qubit: 1,
            bit: BitRef::new("c", 1),
        })
        .unwrap();
        c
    }

    #[test]
    fn bell_census() {
        let got = bell().census();
        assert_eq!(
            got,
            GateCensus {
                n_1q: 1,
                n_2q: 1,
                n_meas: 2,
                n_reset: 0,
                depth: 2
            }
        );
    }

    #[test]
    fn empty_census() {
        assert_eq!(Circuit::new(3).census(), GateCensus::default());
    }

    #[test]
    fn x_then_k_resets() {
        for k in 1..=6u64 {
            let mut c = Circuit::new(1);
            c.push(Op::X(0)).unwrap();
            for _ in 0..k {
                c.push(Op::Reset(0)).unwrap();
            }
            let got = c.census();
            assert_eq!(got.n_1q, 1);
            assert_eq!(got.n_reset, k);
            assert_eq!(got.n_meas, 0);
            assert_eq!(got.depth, k + 1);
            assert_eq!(got.total_ops(), c.ops().len() as u64);
        }
    }

    #[test]
    fn barriers_only_have_zero_depth() {
        let mut c = Circuit::new(2);
        c.push(Op::Barrier(vec![])).unwrap();
        c.push(Op::Barrier(vec![0, 1])).unwrap();
        assert_eq!(c.census(), GateCensus::default());
    }

    #[test]
    fn bell_is_valid() {
        assert!(bell().validate().is_ok());
    }

    #[test]
    fn control_out_of_range() {
        let c = Circuit::from_parts_unchecked(
            2,
            vec![],
            vec![
                Op::H(0),
                Op::Cx {
                    control: 2,
                    target: 1,
                },
            ],
            "",
        );
        let v = c.validate().unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].op_index, Some(1));
        assert!(v[0].to_string().contains("qubit out of range"));
        assert!(v[0].to_string().ends_with("at op 1"));
    }

    #[test]
    fn measure_into_undeclared_register() {
        let c = Circuit::from_parts_unchecked(
            1,
            vec![],
            vec![Op::Measure {
                qubit: 0,
                bit: BitRef::new("out", 0),
            }],
            "",
        );
        let v = c.validate().unwrap_err();
        assert!(v[0].to_string().contains("'out'"));
    }

    #[test]
    fn validation_reports_every_violation() {
        let c = Circuit::from_parts_unchecked(
            0,
            vec![
                ClassicalRegister {
                    name: "c".into(),
                    size: 1,
                },
                ClassicalRegister {
                    name: "c".into(),
                    size: 2,
                },
            ],
            vec![
                Op::H(4),
                Op::Rz {
                    theta: f64::NAN,
                    qubit: 0,
                },
            ],
            "",
        );
        let v = c.validate().unwrap_err();
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn push_rejects_bad_bit_index() {
        let mut c = Circuit::new(1);
        c.add_creg("c", 1).unwrap();
        let err = c
            .push(Op::CondX {
                bit: BitRef::new("c", 1),
                qubit: 0,
            })
            .unwrap_err();
        assert!(matches!(err.kind, ViolationKind::BitOutOfRange { .. }));
        assert!(c.ops().is_empty());
    }

    #[test]
    fn same_qubit_cx_is_rejected() {
        let mut c = Circuit::new(2);
        assert!(c
            .push(Op::Cx {
                control: 1,
                target: 1
            })
            .is_err());
    }

    #[test]
    fn depth_of_concatenation_bounded_by_sum() {
        let a = bell();
        let mut b = Circuit::new(2);
        b.add_creg("c", 2).unwrap();
        for op in a.ops() {
            b.push(op.clone()).unwrap();
        }
        for op in a.ops() {
            b.push(op.clone()).unwrap();
        }
        let sum = a.census() + a.census();
        let got = b.census();
        assert_eq!(got.n_1q, sum.n_1q);
        assert_eq!(got.n_2q, sum.n_2q);
        assert_eq!(got.n_meas, sum.n_meas);
        assert!(got.depth <= sum.depth);
    }
}
