//! Generators for common user circuits, the reset-fidelity test circuit,
//! and benchmark mixes.
//!
//! Every generated circuit measures each data qubit `i` into `c[i]`, so a
//! hidden string or marked state written with qubit 0 first is also the
//! expected bitstring.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{BitRef, Circuit, Op};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BenchError {
    #[error("{kind}: {message}")]
    OutOfRange { kind: &'static str, message: String },
    #[error("mix pool is empty")]
    EmptyPool,
    #[error("mix count must be at least 1")]
    EmptyMix,
    #[error("unknown circuit name '{0}'")]
    UnknownName(String),
    #[error("unknown mix preset '{0}'")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BenchKind {
    Bell,
    Ghz {
        qubits: usize,
    },
    Qft {
        qubits: usize,
    },
    Teleportation,
    /// `angles.len()` must be a multiple of `layers`; the quotient is the
    /// width.
    VariationalAnsatz {
        layers: usize,
        angles: Vec<f64>,
    },
    /// Marked basis state, qubit 0 first.
    Grover2Q {
        marked: [bool; 2],
    },
    PhaseEstimation {
        counting: usize,
        phase: f64,
    },
    /// Hidden string, qubit 0 first.
    BernsteinVazirani {
        hidden: Vec<bool>,
    },
    DeutschJozsa {
        inputs: usize,
        balanced: bool,
    },
}

/// Ansatz angles used by the default variational circuit.
pub const ANSATZ_ANGLES: [f64; 4] = [0.4, 1.2, 0.9, 2.1];

/// Amplitude angle of the state teleported by [`BenchKind::Teleportation`];
/// the target reads 1 with probability `sin²(θ/2) = 0.25`.
pub const TELEPORT_THETA: f64 = PI / 3.0;

impl BenchKind {
    pub fn bell() -> Self {
        BenchKind::Bell
    }

    pub fn ghz() -> Self {
        BenchKind::Ghz { qubits: 3 }
    }

    pub fn qft() -> Self {
        BenchKind::Qft { qubits: 2 }
    }

    pub fn variational() -> Self {
        BenchKind::VariationalAnsatz {
            layers: 2,
            angles: ANSATZ_ANGLES.to_vec(),
        }
    }

    pub fn grover() -> Self {
        BenchKind::Grover2Q {
            marked: [true, true],
        }
    }

    pub fn phase_estimation() -> Self {
        BenchKind::PhaseEstimation {
            counting: 2,
            phase: 0.25,
        }
    }

    pub fn bernstein_vazirani() -> Self {
        BenchKind::BernsteinVazirani {
            hidden: vec![true, false, true],
        }
    }

    pub fn deutsch_jozsa(balanced: bool) -> Self {
        BenchKind::DeutschJozsa {
            inputs: 2,
            balanced,
        }
    }

    /// Short identifier used for labels and fixture names.
    pub fn slug(&self) -> &'static str {
        match self {
            BenchKind::Bell => "bell",
            BenchKind::Ghz { .. } => "ghz",
            BenchKind::Qft { .. } => "qft",
            BenchKind::Teleportation => "teleportation",
            BenchKind::VariationalAnsatz { .. } => "variational_ansatz",
            BenchKind::Grover2Q { .. } => "grover",
            BenchKind::PhaseEstimation { .. } => "phase_estimation",
            BenchKind::BernsteinVazirani { .. } => "bernstein_vazirani",
            BenchKind::DeutschJozsa { balanced: true, .. } => "deutsch_jozsa_balanced",
            BenchKind::DeutschJozsa {
                balanced: false, ..
            } => "deutsch_jozsa_constant",
        }
    }

    /// Default-parameter kind for a human-readable circuit name.
    pub fn from_name(name: &str) -> Result<Self, BenchError> {
        let norm: String = name
            .trim()
            .to_lowercase()
            .replace(['\u{2013}', '\u{2014}', '-', '_', '\''], " ")
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ");
        let kind = match norm.as_str() {
            "bell" | "bell state" => BenchKind::bell(),
            "ghz" => BenchKind::ghz(),
            "qft" | "quantum fourier transform" => BenchKind::qft(),
            "teleportation" | "quantum teleportation" => BenchKind::Teleportation,
            "variational ansatz" | "ansatz" => BenchKind::variational(),
            "grover" | "grover s oracle" | "grovers oracle" => BenchKind::grover(),
            "phase estimation" | "qpe" => BenchKind::phase_estimation(),
            "bernstein vazirani" | "bv" => BenchKind::bernstein_vazirani(),
            "deutsch jozsa (balanced)" | "deutsch jozsa balanced" => BenchKind::deutsch_jozsa(true),
            "deutsch jozsa (constant)" | "deutsch jozsa constant" => {
                BenchKind::deutsch_jozsa(false)
            }
            _ => {
                if let Some(kind) = common_circuits()
                    .into_iter()
                    .chain([BenchKind::ghz()])
                    .find(|k| k.slug() == name)
                {
                    kind
                } else {
                    return Err(BenchError::UnknownName(name.to_string()));
                }
            }
        };
        Ok(kind)
    }
}

impl fmt::Display for BenchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// The eight common user circuits with default parameters.
pub fn common_circuits() -> Vec<BenchKind> {
    vec![
        BenchKind::bell(),
        BenchKind::qft(),
        BenchKind::Teleportation,
        BenchKind::variational(),
        BenchKind::grover(),
        BenchKind::phase_estimation(),
        BenchKind::bernstein_vazirani(),
        BenchKind::deutsch_jozsa(true),
    ]
}

/// Pool for random mixes: the common circuits plus GHZ.
pub fn mix_pool() -> Vec<BenchKind> {
    let mut pool = common_circuits();
    pool.insert(0, BenchKind::ghz());
    pool
}

struct Builder {
    c: Circuit,
}

impl Builder {
    fn new(width: usize, label: &str) -> Self {
        Builder {
            c: Circuit::new(width).with_label(label),
        }
    }

    fn creg(mut self, name: &str, size: usize) -> Self {
        self.c.add_creg(name, size).expect("generator register");
        self
    }

    fn op(&mut self, op: Op) -> &mut Self {
        self.c.push(op).expect("generator op in range");
        self
    }

    fn h(&mut self, q: usize) -> &mut Self {
        self.op(Op::H(q))
    }

    fn x(&mut self, q: usize) -> &mut Self {
        self.op(Op::X(q))
    }

    fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.op(Op::Cx { control, target })
    }

    /// Controlled phase `diag(1, 1, 1, e^{iλ})`.
    fn cp(&mut self, lambda: f64, control: usize, target: usize) -> &mut Self {
        self.op(Op::Cu3 {
            theta: 0.0,
            phi: 0.0,
            lambda,
            control,
            target,
        })
    }

    fn cz(&mut self, control: usize, target: usize) -> &mut Self {
        self.h(target).cx(control, target).h(target)
    }

    fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.cx(a, b).cx(b, a).cx(a, b)
    }

    fn measure(&mut self, q: usize, reg: &str, i: usize) -> &mut Self {
        self.op(Op::Measure {
            qubit: q,
            bit: BitRef::new(reg, i),
        })
    }

    fn measure_all(&mut self, n: usize) -> &mut Self {
        for q in 0..n {
            self.measure(q, "c", q);
        }
        self
    }

    fn qft(&mut self, n: usize) -> &mut Self {
        for j in (0..n).rev() {
            self.h(j);
            for m in (0..j).rev() {
                self.cp(PI / f64::from(1u32 << (j - m)), m, j);
            }
        }
        for i in 0..n / 2 {
            self.swap(i, n - 1 - i);
        }
        self
    }

    fn inverse_qft(&mut self, n: usize) -> &mut Self {
        for i in 0..n / 2 {
            self.swap(i, n - 1 - i);
        }
        for j in 0..n {
            for m in 0..j {
                self.cp(-PI / f64::from(1u32 << (j - m)), m, j);
            }
            self.h(j);
        }
        self
    }

    fn finish(self) -> Circuit {
        debug_assert!(self.c.validate().is_ok());
        self.c
    }
}

fn range_check(
    kind: &'static str,
    ok: bool,
    message: impl FnOnce() -> String,
) -> Result<(), BenchError> {
    if ok {
        Ok(())
    } else {
        Err(BenchError::OutOfRange {
            kind,
            message: message(),
        })
    }
}

pub fn build(kind: &BenchKind) -> Result<Circuit, BenchError> {
    let label = kind.slug();
    let circuit = match kind {
        BenchKind::Bell => {
            let mut b = Builder::new(2, label).creg("c", 2);
            b.h(0).cx(0, 1).measure_all(2);
            b.finish()
        }
        BenchKind::Ghz { qubits } => {
            let n = *qubits;
            range_check("ghz", (2..=5).contains(&n), || {
                format!("{n} qubits, expected 2..=5")
            })?;
            let mut b = Builder::new(n, label).creg("c", n);
            b.h(0);
            for q in 1..n {
                b.cx(q - 1, q);
            }
            b.measure_all(n);
            b.finish()
        }
        BenchKind::Qft { qubits } => {
            let n = *qubits;
            range_check("qft", (2..=4).contains(&n), || {
                format!("{n} qubits, expected 2..=4")
            })?;
            let mut b = Builder::new(n, label).creg("c", n);
            b.x(0).qft(n).measure_all(n);
            b.finish()
        }
        BenchKind::Teleportation => {
            let mut b = Builder::new(3, label).creg("m", 2).creg("c", 1);
            b.op(Op::U3 {
                theta: TELEPORT_THETA,
                phi: 0.0,
                lambda: 0.0,
                qubit: 0,
            });
            b.h(1).cx(1, 2).cx(0, 1).h(0);
            b.measure(0, "m", 0).measure(1, "m", 1);
            // Only the X correction changes Z-basis statistics of the target.
            b.op(Op::CondX {
                bit: BitRef::new("m", 1),
                qubit: 2,
            });
            b.measure(2, "c", 0);
            b.finish()
        }
        BenchKind::VariationalAnsatz { layers, angles } => {
            let l = *layers;
            range_check("variational_ansatz", (1..=4).contains(&l), || {
                format!("{l} layers, expected 1..=4")
            })?;
            range_check("variational_ansatz", angles.len() % l == 0, || {
                format!("{} angles do not split into {l} layers", angles.len())
            })?;
            let n = angles.len() / l;
            range_check("variational_ansatz", (2..=4).contains(&n), || {
                format!("{n} qubits, expected 2..=4")
            })?;
            range_check(
                "variational_ansatz",
                angles.iter().all(|a| a.is_finite()),
                || "angles must be finite".to_string(),
            )?;
            let mut b = Builder::new(n, label).creg("c", n);
            for layer in angles.chunks(n) {
                for (q, &theta) in layer.iter().enumerate() {
                    b.op(Op::U3 {
                        theta,
                        phi: 0.0,
                        lambda: 0.0,
                        qubit: q,
                    });
                }
                for q in 1..n {
                    b.cx(q - 1, q);
                }
            }
            b.measure_all(n);
            b.finish()
        }
        BenchKind::Grover2Q { marked } => {
            let mut b = Builder::new(2, label).creg("c", 2);
            b.h(0).h(1);
            let flips: Vec<usize> = (0..2).filter(|&q| !marked[q]).collect();
            for &q in &flips {
                b.x(q);
            }
            b.cz(0, 1);
            for &q in &flips {
                b.x(q);
            }
            b.h(0).h(1).x(0).x(1).cz(0, 1).x(0).x(1).h(0).h(1);
            b.measure_all(2);
            b.finish()
        }
        BenchKind::PhaseEstimation { counting, phase } => {
            let n = *counting;
            range_check("phase_estimation", (1..=4).contains(&n), || {
                format!("{n} counting qubits, expected 1..=4")
            })?;
            range_check("phase_estimation", (0.0..1.0).contains(phase), || {
                format!("phase {phase} outside [0, 1)")
            })?;
            let mut b = Builder::new(n + 1, label).creg("c", n);
            b.x(n);
            for j in 0..n {
                b.h(j);
            }
            for j in 0..n {
                b.cp(2.0 * PI * phase * f64::from(1u32 << j), j, n);
            }
            b.inverse_qft(n).measure_all(n);
            b.finish()
        }
        BenchKind::BernsteinVazirani { hidden } => {
            let n = hidden.len();
            range_check("bernstein_vazirani", (1..=4).contains(&n), || {
                format!("hidden string of length {n}, expected 1..=4")
            })?;
            let mut b = Builder::new(n + 1, label).creg("c", n);
            b.x(n);
            for q in 0..=n {
                b.h(q);
            }
            for (q, &bit) in hidden.iter().enumerate() {
                if bit {
                    b.cx(q, n);
                }
            }
            for q in 0..n {
                b.h(q);
            }
            b.measure_all(n);
            b.finish()
        }
        BenchKind::DeutschJozsa { inputs, balanced } => {
            let n = *inputs;
            range_check("deutsch_jozsa", (1..=4).contains(&n), || {
                format!("{n} inputs, expected 1..=4")
            })?;
            let mut b = Builder::new(n + 1, label).creg("c", n);
            b.x(n);
            for q in 0..=n {
                b.h(q);
            }
            if *balanced {
                for q in 0..n {
                    b.cx(q, n);
                }
            }
            for q in 0..n {
                b.h(q);
            }
            b.measure_all(n);
            b.finish()
        }
    };
    Ok(circuit)
}

/// One qubit prepared in |1⟩, then `k` rounds of barrier, measurement into
/// `c[i]`, and X conditioned on that bit.
pub fn build_reset_test(k: usize) -> Result<Circuit, BenchError> {
    range_check("reset_test", (1..=31).contains(&k), || {
        format!("{k} resets, expected 1..=31")
    })?;
    let mut b = Builder::new(1, &format!("reset_test_{k}")).creg("c", k);
    b.x(0);
    for i in 0..k {
        b.op(Op::Barrier(vec![0]));
        b.measure(0, "c", i);
        b.op(Op::CondX {
            bit: BitRef::new("c", i),
            qubit: 0,
        });
    }
    Ok(b.finish())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixSpec {
    pub pool: Vec<BenchKind>,
    pub count: usize,
    pub seed: u64,
}

/// `count` uniform draws with replacement from the pool.
pub fn generate_mix(spec: &MixSpec) -> Result<Vec<BenchKind>, BenchError> {
    if spec.pool.is_empty() {
        return Err(BenchError::EmptyPool);
    }
    if spec.count == 0 {
        return Err(BenchError::EmptyMix);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok((0..spec.count)
        .map(|_| spec.pool[rng.random_range(0..spec.pool.len())].clone())
        .collect())
}

const MIX_4: [(&str, &str); 4] = [
    (
        "mix4a",
        "Quantum Fourier Transform, Deutsch-Jozsa (Balanced), Bell State, Quantum Teleportation",
    ),
    (
        "mix4b",
        "Quantum Teleportation, Deutsch-Jozsa (Balanced), Phase Estimation, Variational Ansatz",
    ),
    (
        "mix4c",
        "Bernstein-Vazirani, Phase Estimation, Quantum Fourier Transform, Grover's Oracle",
    ),
    (
        "mix4d",
        "Bell State, Phase Estimation, Bernstein-Vazirani, Quantum Teleportation",
    ),
];

const MIX_8_TO_80: [(&str, &str); 6] = [
    ("mix8", "GHZ, Bernstein–Vazirani, Bell, Teleportation, Grover, Deutsch–Jozsa (Balanced), Phase Estimation, Variational Ansatz"),
    ("mix16", "Teleportation, Variational Ansatz, Bernstein–Vazirani, Bernstein–Vazirani, Variational Ansatz, Teleportation, Teleportation, Bell, Bernstein–Vazirani, Bernstein–Vazirani, Bell, Bernstein–Vazirani, Bernstein–Vazirani, Grover, Grover, Bernstein–Vazirani"),
    ("mix32", "Bernstein–Vazirani, Deutsch–Jozsa (Balanced), Deutsch–Jozsa (Balanced), Teleportation, Bernstein–Vazirani, Phase Estimation, Variational Ansatz, Deutsch–Jozsa (Balanced), Teleportation, Bell, Grover, Bell, Phase Estimation, Phase Estimation, Phase Estimation, Deutsch–Jozsa (Balanced), Bernstein–Vazirani, Variational Ansatz, Teleportation, Teleportation, Grover, Bell, Bell, Deutsch–Jozsa (Balanced), Variational Ansatz, Teleportation, Variational Ansatz, Bernstein–Vazirani, Grover, Teleportation, Bernstein–Vazirani, Grover"),
    ("mix48", "Variational Ansatz, Bell, Bernstein–Vazirani, Bernstein–Vazirani, Phase Estimation, Grover, Bernstein–Vazirani, Bell, Bernstein–Vazirani, Bell, Bernstein–Vazirani, Phase Estimation, Teleportation, Bernstein–Vazirani, Teleportation, Teleportation, Deutsch–Jozsa (Balanced), Teleportation, Variational Ansatz, Teleportation, Phase Estimation, Teleportation, Grover, Grover, Phase Estimation, Teleportation, Variational Ansatz, Grover, Teleportation, Grover, Bernstein–Vazirani, Teleportation, Variational Ansatz, Bell, Teleportation, Deutsch–Jozsa (Balanced), Bernstein–Vazirani, Bell, Bell, Grover, Phase Estimation, Teleportation, Bell, Bernstein–Vazirani, Grover, Grover, Grover, Deutsch–Jozsa (Balanced)"),
    ("mix64", "Bell, Variational Ansatz, Phase Estimation, Teleportation, Bernstein–Vazirani, Variational Ansatz, Phase Estimation, Variational Ansatz, Phase Estimation, Phase Estimation, Phase Estimation, Grover, Deutsch–Jozsa (Balanced), Grover, Teleportation, Phase Estimation, Deutsch–Jozsa (Balanced), Teleportation, Bernstein–Vazirani, Phase Estimation, Grover, Deutsch–Jozsa (Balanced), Teleportation, Variational Ansatz, Deutsch–Jozsa (Balanced), Bell, Bernstein–Vazirani, Teleportation, Teleportation, Grover, Bernstein–Vazirani, Bernstein–Vazirani, Teleportation, Teleportation, Phase Estimation, Phase Estimation, Deutsch–Jozsa (Balanced), Phase Estimation, Deutsch–Jozsa (Balanced), Deutsch–Jozsa (Balanced), Variational Ansatz, Bernstein–Vazirani, Bell, Teleportation, Teleportation, Phase Estimation, Bell, Grover, Deutsch–Jozsa (Balanced), Phase Estimation, Deutsch–Jozsa (Balanced), Deutsch–Jozsa (Balanced), Teleportation, Phase Estimation, Bernstein–Vazirani, Bell, Deutsch–Jozsa (Balanced), Phase Estimation, Variational Ansatz, Teleportation, Bell, Deutsch–Jozsa (Balanced), Grover, Phase Estimation"),
    ("mix80", "Teleportation, Phase Estimation, Bell, Deutsch–Jozsa (Balanced), Grover, Bell, Variational Ansatz, Phase Estimation, Bell, Phase Estimation, Phase Estimation, Phase Estimation, Deutsch–Jozsa (Balanced), Teleportation, Grover, Grover, Phase Estimation, Phase Estimation, Variational Ansatz, Teleportation, Variational Ansatz, Teleportation, Deutsch–Jozsa (Balanced), Bernstein–Vazirani, Phase Estimation, Teleportation, Bell, Bernstein–Vazirani, Teleportation, Phase Estimation, Phase Estimation, Phase Estimation, Deutsch–Jozsa (Balanced), Deutsch–Jozsa (Balanced), Teleportation, Deutsch–Jozsa (Balanced), Deutsch–Jozsa (Balanced), Deutsch–Jozsa (Balanced), Bernstein–Vazirani, Deutsch–Jozsa (Balanced), Bernstein–Vazirani, Grover, Grover, Phase Estimation, Teleportation, Teleportation, Phase Estimation, Grover, Grover, Phase Estimation, Phase Estimation, Bernstein–Vazirani, Teleportation, Grover, Teleportation, Bernstein–Vazirani, Variational Ansatz, Variational Ansatz, Bell, Variational Ansatz, Bell, Teleportation, Grover, Grover, Grover, Teleportation, Bell, Grover, Phase Estimation, Teleportation, Bernstein–Vazirani, Bell, Bernstein–Vazirani, Bernstein–Vazirani, Variational Ansatz, Teleportation, Bernstein–Vazirani, Deutsch–Jozsa (Balanced), Grover, Phase Estimation"),
];

/// Names of the shipped mixes, in size order.
pub fn preset_names() -> Vec<&'static str> {
    MIX_4
        .iter()
        .chain(MIX_8_TO_80.iter())
        .map(|(n, _)| *n)
        .collect()
}

/// Circuit sequence of a shipped mix (`mix4a`…`mix4d`, `mix8`…`mix80`).
pub fn preset_mix(name: &str) -> Result<Vec<BenchKind>, BenchError> {
    let (_, list) = MIX_4
        .iter()
        .chain(MIX_8_TO_80.iter())
        .find(|(n, _)| *n == name)
        .ok_or_else(|| BenchError::UnknownPreset(name.to_string()))?;
    list.split(", ").map(BenchKind::from_name).collect()
}
