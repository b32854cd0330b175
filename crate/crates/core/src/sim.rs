//! Seeded statevector simulation with readout and conditional-X noise.
//!
//! Each shot evolves its own statevector. Measurements sample the Born rule,
//! then the recorded bit is flipped with the qubit's assignment-error
//! probability. A `CondX` whose bit is 1 fails (acts as identity) with the
//! qubit's `condx` error probability. `Reset` is a hidden measurement followed
//! by a `CondX` on that hidden bit, with the same noise.
//!
//! Shot `i` of a run seeded with `seed` draws from ChaCha8 keyed by `seed`
//! on stream `i`, so shots can be evaluated in any order and aggregated by
//! index.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{BitRef, Circuit, Op};
use crate::counts::CountsTable;

/// Identifier written into counts metadata.
pub const RNG_NAME: &str = "chacha8-stream";

/// Published fidelities of the evaluated backend: readout 96.74 %,
/// conditional X 99.80 %.
pub const DEFAULT_READOUT_ERROR: f64 = 0.0326;
pub const DEFAULT_CONDX_ERROR: f64 = 0.0020;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("probability {name} = {value} is outside [0, 1]")]
    BadProbability { name: &'static str, value: f64 },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("{0} is not a unitary gate")]
    NotUnitary(String),
}

/// Error channel of one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitNoise {
    /// P(record 0 | state 1)
    pub read_1to0: f64,
    /// P(record 1 | state 0)
    pub read_0to1: f64,
    /// P(conditional X acts as identity)
    pub condx: f64,
}

impl QubitNoise {
    pub const IDEAL: QubitNoise = QubitNoise {
        read_1to0: 0.0,
        read_0to1: 0.0,
        condx: 0.0,
    };

    pub fn new(read_1to0: f64, read_0to1: f64, condx: f64) -> Result<Self, SimError> {
        for (name, value) in [
            ("read_1to0", read_1to0),
            ("read_0to1", read_0to1),
            ("condx", condx),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SimError::BadProbability { name, value });
            }
        }
        Ok(QubitNoise {
            read_1to0,
            read_0to1,
            condx,
        })
    }

    pub fn symmetric(readout: f64, condx: f64) -> Result<Self, SimError> {
        Self::new(readout, readout, condx)
    }
}

impl Default for QubitNoise {
    fn default() -> Self {
        QubitNoise {
            read_1to0: DEFAULT_READOUT_ERROR,
            read_0to1: DEFAULT_READOUT_ERROR,
            condx: DEFAULT_CONDX_ERROR,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub base: QubitNoise,
    pub per_qubit: BTreeMap<usize, QubitNoise>,
    /// When set, a misread also leaves the qubit in the misread basis state.
    /// Off by default: the qubit collapses to the true outcome and only the
    /// record is wrong.
    pub apply_readout_to_state: bool,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::uniform(QubitNoise::default())
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel::uniform(QubitNoise::IDEAL)
    }

    pub fn uniform(base: QubitNoise) -> Self {
        NoiseModel {
            base,
            per_qubit: BTreeMap::new(),
            apply_readout_to_state: false,
        }
    }

    pub fn with_qubit(mut self, qubit: usize, noise: QubitNoise) -> Self {
        self.per_qubit.insert(qubit, noise);
        self
    }

    pub fn qubit(&self, q: usize) -> &QubitNoise {
        self.per_qubit.get(&q).unwrap_or(&self.base)
    }
}

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [
        [c(co, 0.0), -Complex64::from_polar(s, lambda)],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(co, phi + lambda),
        ],
    ]
}

pub fn rz_matrix(theta: f64) -> Mat2 {
    [
        [Complex64::from_polar(1.0, -theta / 2.0), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

const H_MATRIX: Mat2 = [
    [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
    ],
    [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(-FRAC_1_SQRT_2, 0.0),
    ],
];

/// Amplitudes over `2^n` basis states; index bit `q` is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amp: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Self {
        assert!(n < usize::BITS as usize - 1, "too many qubits");
        let mut amp = vec![Complex64::new(0.0, 0.0); 1 << n];
        amp[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amp }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply_1q(&mut self, q: usize, m: &Mat2) {
        let mask = 1usize << q;
        for i in 0..self.amp.len() {
            if i & mask == 0 {
                let (a0, a1) = (self.amp[i], self.amp[i | mask]);
                self.amp[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amp[i | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Applies `m` to `target` on the subspace where `control` is 1.
    pub fn apply_controlled(&mut self, control: usize, target: usize, m: &Mat2) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amp.len() {
            if i & cmask != 0 && i & tmask == 0 {
                let (a0, a1) = (self.amp[i], self.amp[i | tmask]);
                self.amp[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amp[i | tmask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_x(&mut self, q: usize) {
        let mask = 1usize << q;
        for i in 0..self.amp.len() {
            if i & mask == 0 {
                self.amp.swap(i, i | mask);
            }
        }
    }

    /// Applies a unitary op. Measurement, reset and conditional ops are not
    /// unitary and are rejected; [`ShotState`] handles those.
    pub fn apply(&mut self, op: &Op) -> Result<(), SimError> {
        for q in op.qubits() {
            assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        }
        match op {
            Op::H(q) => self.apply_1q(*q, &H_MATRIX),
            Op::X(q) => self.apply_x(*q),
            Op::Rz { theta, qubit } => self.apply_1q(*qubit, &rz_matrix(*theta)),
            Op::U3 {
                theta,
                phi,
                lambda,
                qubit,
            } => self.apply_1q(*qubit, &u3_matrix(*theta, *phi, *lambda)),
            Op::Cx { control, target } => {
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                for i in 0..self.amp.len() {
                    if i & cmask != 0 && i & tmask == 0 {
                        self.amp.swap(i, i | tmask);
                    }
                }
            }
            Op::Cu3 {
                theta,
                phi,
                lambda,
                control,
                target,
            } => self.apply_controlled(*control, *target, &u3_matrix(*theta, *phi, *lambda)),
            other => return Err(SimError::NotUnitary(format!("{other:?}"))),
        }
        Ok(())
    }

    pub fn prob_one(&self, q: usize) -> f64 {
        let mask = 1usize << q;
        self.amp
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects qubit `q` onto `outcome` and renormalizes.
    pub fn collapse(&mut self, q: usize, outcome: bool) {
        let mask = 1usize << q;
        let mut norm = 0.0;
        for (i, a) in self.amp.iter_mut().enumerate() {
            if ((i & mask) != 0) != outcome {
                *a = Complex64::new(0.0, 0.0);
            } else {
                norm += a.norm_sqr();
            }
        }
        let scale = 1.0 / norm.sqrt();
        for a in &mut self.amp {
            *a *= scale;
        }
    }
}

/// Quantum and classical state of one shot in progress.
pub struct ShotState<R> {
    pub state: StateVector,
    bits: Vec<Vec<bool>>,
    reg_index: BTreeMap<String, usize>,
    rng: R,
}

impl<R: Rng> ShotState<R> {
    pub fn new(circuit: &Circuit, rng: R) -> Self {
        let reg_index = circuit
            .cregs()
            .iter()
            .enumerate()
            .map(|(i, r)| (r.name.clone(), i))
            .collect();
        ShotState {
            state: StateVector::zero(circuit.width()),
            bits: circuit
                .cregs()
                .iter()
                .map(|r| vec![false; r.size])
                .collect(),
            reg_index,
            rng,
        }
    }

    /// Born-rule measurement followed by assignment error. Returns the
    /// recorded bit.
    pub fn measure(&mut self, q: usize, noise: &QubitNoise, project_misread: bool) -> bool {
        let p1 = self.state.prob_one(q).clamp(0.0, 1.0);
        let outcome = self.rng.random::<f64>() < p1;
        self.state.collapse(q, outcome);
        let flip_p = if outcome {
            noise.read_1to0
        } else {
            noise.read_0to1
        };
        let recorded = if flip_p > 0.0 && self.rng.random::<f64>() < flip_p {
            !outcome
        } else {
            outcome
        };
        if project_misread && recorded != outcome {
            self.state.apply_x(q);
        }
        recorded
    }

    /// X on `q` when `bit` is set, failing with the qubit's condx error.
    pub fn cond_x(&mut self, q: usize, bit: bool, noise: &QubitNoise) {
        if !bit {
            return;
        }
        if noise.condx > 0.0 && self.rng.random::<f64>() < noise.condx {
            return;
        }
        self.state.apply_x(q);
    }

    pub fn reset(&mut self, q: usize, noise: &QubitNoise, project_misread: bool) {
        let scratch = self.measure(q, noise, project_misread);
        self.cond_x(q, scratch, noise);
    }

    fn bit_slot(&self, bit: &BitRef) -> (usize, usize) {
        (self.reg_index[&bit.register], bit.index)
    }

    pub fn step(&mut self, op: &Op, noise: &NoiseModel) {
        match op {
            Op::Measure { qubit, bit } => {
                let v = self.measure(*qubit, noise.qubit(*qubit), noise.apply_readout_to_state);
                let (r, i) = self.bit_slot(bit);
                self.bits[r][i] = v;
            }
            Op::CondX { bit, qubit } => {
                let (r, i) = self.bit_slot(bit);
                let v = self.bits[r][i];
                self.cond_x(*qubit, v, noise.qubit(*qubit));
            }
            Op::Reset(q) => self.reset(*q, noise.qubit(*q), noise.apply_readout_to_state),
            Op::Barrier(_) => {}
            unitary => self
                .state
                .apply(unitary)
                .expect("non-unitary ops handled above"),
        }
    }

    pub fn into_record(self) -> ShotRecord {
        ShotRecord { bits: self.bits }
    }
}

/// Final classical register contents of one shot, in declaration order.
/// Later writes to a bit overwrite earlier ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotRecord {
    pub bits: Vec<Vec<bool>>,
}

impl ShotRecord {
    pub fn bitstring(&self) -> String {
        self.bits
            .iter()
            .flatten()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

/// Generator for shot `index` of a run seeded with `seed`.
pub fn shot_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs one shot. The circuit must already be valid.
pub fn run_shot<R: Rng>(circuit: &Circuit, noise: &NoiseModel, rng: R) -> ShotRecord {
    let mut shot = ShotState::new(circuit, rng);
    for op in circuit.ops() {
        shot.step(op, noise);
    }
    shot.into_record()
}

/// Runs `shots` independent shots and aggregates them. Output depends only
/// on the arguments, never on thread scheduling.
pub fn run_shots(
    circuit: &Circuit,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<CountsTable, SimError> {
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    if let Err(v) = circuit.validate() {
        return Err(SimError::InvalidCircuit(
            v.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    for q in std::iter::once(&noise.base).chain(noise.per_qubit.values()) {
        QubitNoise::new(q.read_1to0, q.read_0to1, q.condx)?;
    }
    let outcomes: Vec<String> = (0..shots)
        .into_par_iter()
        .map(|i| run_shot(circuit, noise, shot_rng(seed, i)).bitstring())
        .collect();
    let mut table = CountsTable::new();
    for o in &outcomes {
        table.record(o);
    }
    Ok(table)
}

/// Exact outcome distribution of a circuit whose only non-unitary ops are
/// terminal measurements, computed from the final statevector.
pub fn ideal_distribution(circuit: &Circuit) -> Option<BTreeMap<String, f64>> {
    let mut state = StateVector::zero(circuit.width());
    let mut measured: Vec<(usize, usize)> = Vec::new();
    let offsets: BTreeMap<&str, usize> = circuit
        .cregs()
        .iter()
        .scan(0, |acc, r| {
            let o = *acc;
            *acc += r.size;
            Some((r.name.as_str(), o))
        })
        .collect();
    for op in circuit.ops() {
        match op {
            Op::Measure { qubit, bit } => {
                measured.retain(|(_, pos)| *pos != offsets[bit.register.as_str()] + bit.index);
                measured.push((*qubit, offsets[bit.register.as_str()] + bit.index));
            }
            Op::Barrier(_) => {}
            op if op.is_unitary() => {
                if op
                    .qubits()
                    .iter()
                    .any(|q| measured.iter().any(|(m, _)| m == q))
                {
                    return None;
                }
                state.apply(op).ok()?;
            }
            _ => return None,
        }
    }
    let width = circuit.num_clbits();
    let mut out = BTreeMap::new();
    for (i, p) in state.probabilities().into_iter().enumerate() {
        if p < 1e-15 {
            continue;
        }
        let mut bits = vec!['0'; width];
        for (q, pos) in &measured {
            if i >> q & 1 == 1 {
                bits[*pos] = '1';
            }
        }
        *out.entry(bits.into_iter().collect()).or_insert(0.0) += p;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    type Dense = [[Complex64; 2]; 2];

    fn matmul(a: &Dense, b: &Dense) -> Dense {
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    #[test]
    fn x_flips_zero_to_one() {
        let mut s = StateVector::zero(1);
        s.apply(&Op::X(0)).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0, 0.0));
        assert_eq!(s.amplitudes()[0], c(0.0, 0.0));
    }

    #[test]
    fn rz_only_changes_phase() {
        let mut s = StateVector::zero(1);
        s.apply(&Op::H(0)).unwrap();
        let before = s.probabilities();
        s.apply(&Op::Rz {
            theta: 0.9,
            qubit: 0,
        })
        .unwrap();
        for (a, b) in before.iter().zip(s.probabilities()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn u3_half_pi_is_hadamard_and_squares_to_identity() {
        let h = u3_matrix(std::f64::consts::FRAC_PI_2, 0.0, std::f64::consts::PI);
        for i in 0..2 {
            for j in 0..2 {
                assert!((h[i][j] - H_MATRIX[i][j]).norm() < 1e-12);
            }
        }
        let hh = matmul(&h, &h);
        assert!((hh[0][0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(hh[0][1].norm() < 1e-12);
        assert!(hh[1][0].norm() < 1e-12);
        assert!((hh[1][1] - c(1.0, 0.0)).norm() < 1e-12);

        let mut s = StateVector::zero(1);
        let op = Op::U3 {
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
            lambda: std::f64::consts::PI,
            qubit: 0,
        };
        s.apply(&op).unwrap();
        s.apply(&op).unwrap();
        assert!((s.amplitudes()[0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cx_matches_printed_matrix() {
        // Columns of the CX matrix with control q0, target q1:
        // |0>->|0>, |1>->|3>, |2>->|2>, |3>->|1>.
        for (input, expect) in [(0usize, 0usize), (1, 3), (2, 2), (3, 1)] {
            let mut s = StateVector::zero(2);
            if input & 1 != 0 {
                s.apply_x(0);
            }
            if input & 2 != 0 {
                s.apply_x(1);
            }
            s.apply(&Op::Cx {
                control: 0,
                target: 1,
            })
            .unwrap();
            assert_eq!(s.amplitudes()[expect], c(1.0, 0.0));
        }
    }

    #[test]
    fn cu3_acts_only_when_control_set() {
        let mut s = StateVector::zero(2);
        let op = Op::Cu3 {
            theta: std::f64::consts::PI,
            phi: 0.0,
            lambda: 0.0,
            control: 0,
            target: 1,
        };
        s.apply(&op).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        s.apply_x(0);
        s.apply(&op).unwrap();
        assert!((s.amplitudes()[3] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn non_unitary_rejected_by_apply() {
        let mut s = StateVector::zero(1);
        assert!(s.apply(&Op::Reset(0)).is_err());
    }

    #[test]
    fn norm_preserved_under_random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = StateVector::zero(4);
        for _ in 0..500 {
            let q = rng.random_range(0..4);
            let t = (q + rng.random_range(1..4)) % 4;
            let op = match rng.random_range(0..6) {
                0 => Op::H(q),
                1 => Op::X(q),
                2 => Op::Rz {
                    theta: rng.random::<f64>() * 7.0,
                    qubit: q,
                },
                3 => Op::U3 {
                    theta: rng.random::<f64>() * 7.0,
                    phi: rng.random::<f64>() * 7.0,
                    lambda: rng.random::<f64>() * 7.0,
                    qubit: q,
                },
                4 => Op::Cx {
                    control: q,
                    target: t,
                },
                _ => Op::Cu3 {
                    theta: rng.random::<f64>() * 7.0,
                    phi: rng.random::<f64>() * 7.0,
                    lambda: rng.random::<f64>() * 7.0,
                    control: q,
                    target: t,
                },
            };
            s.apply(&op).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn noiseless_bell_is_correlated() {
        let c = parse("qubits 2\ncreg c 2\nh 0\ncx 0 1\nmeasure 0 -> c[0]\nmeasure 1 -> c[1]\n")
            .unwrap();
        let t = run_shots(&c, &NoiseModel::noiseless(), 1000, 9).unwrap();
        assert_eq!(t.shots(), 1000);
        assert_eq!(t.get("01") + t.get("10"), 0);
        assert_eq!(t.get("00") + t.get("11"), 1000);
    }

    #[test]
    fn noiseless_reset_always_grounds() {
        let c = parse("qubits 1\ncreg c 1\nx 0\nreset 0\nmeasure 0 -> c[0]\n").unwrap();
        let t = run_shots(&c, &NoiseModel::noiseless(), 500, 1).unwrap();
        assert_eq!(t.get("0"), 500);
    }

    #[test]
    fn reset_scratch_bit_is_hidden() {
        let c = parse("qubits 2\ncreg c 1\nx 0\nreset 0\nreset 1\nmeasure 1 -> c[0]\n").unwrap();
        let t = run_shots(&c, &NoiseModel::default(), 50, 1).unwrap();
        assert_eq!(t.bit_width(), Some(1));
    }

    #[test]
    fn remeasurement_keeps_latest_value() {
        let c = parse("qubits 1\ncreg c 1\nmeasure 0 -> c[0]\nx 0\nmeasure 0 -> c[0]\n").unwrap();
        let t = run_shots(&c, &NoiseModel::noiseless(), 20, 1).unwrap();
        assert_eq!(t.get("1"), 20);
    }

    #[test]
    fn condx_reads_register() {
        let c = parse(
            "qubits 2\ncreg m 1\ncreg c 1\nx 0\nmeasure 0 -> m[0]\nxif m[0] 1\nmeasure 1 -> c[0]\n",
        )
        .unwrap();
        let t = run_shots(&c, &NoiseModel::noiseless(), 20, 1).unwrap();
        assert_eq!(t.get("11"), 20);
    }

    #[test]
    fn misread_projection_flag() {
        // Readout always wrong: the record says 1 for a grounded qubit.
        let always_wrong = QubitNoise::new(1.0, 1.0, 0.0).unwrap();
        let c =
            parse("qubits 1\ncreg a 1\ncreg b 1\nmeasure 0 -> a[0]\nmeasure 0 -> b[0]\n").unwrap();
        let mut noise = NoiseModel::uniform(always_wrong);
        let t = run_shots(&c, &noise, 10, 1).unwrap();
        // qubit stays |0>, both reads flip to 1
        assert_eq!(t.get("11"), 10);
        noise.apply_readout_to_state = true;
        let t = run_shots(&c, &noise, 10, 1).unwrap();
        // first misread moves the qubit to |1>, second read flips back to 0
        assert_eq!(t.get("10"), 10);
    }

    #[test]
    fn zero_shots_rejected() {
        let c = Circuit::new(1);
        assert_eq!(
            run_shots(&c, &NoiseModel::noiseless(), 0, 1),
            Err(SimError::ZeroShots)
        );
    }

    #[test]
    fn invalid_noise_rejected() {
        assert!(QubitNoise::new(1.5, 0.0, 0.0).is_err());
        let mut noise = NoiseModel::noiseless();
        noise.base.condx = -0.1;
        assert!(run_shots(&Circuit::new(1), &noise, 1, 0).is_err());
    }

    #[test]
    fn deterministic_for_same_seed() {
        let c = parse(
            "qubits 2\ncreg c 2\nh 0\nh 1\nreset 0\nh 0\nmeasure 0 -> c[0]\nmeasure 1 -> c[1]\n",
        )
        .unwrap();
        let a = run_shots(&c, &NoiseModel::default(), 5, 42).unwrap();
        let b = run_shots(&c, &NoiseModel::default(), 5, 42).unwrap();
        assert_eq!(a.to_text(42, RNG_NAME), b.to_text(42, RNG_NAME));
    }

    #[test]
    fn ideal_distribution_of_bell() {
        let c = parse("qubits 2\ncreg c 2\nh 0\ncx 0 1\nmeasure 0 -> c[0]\nmeasure 1 -> c[1]\n")
            .unwrap();
        let d = ideal_distribution(&c).unwrap();
        assert_eq!(d.len(), 2);
        assert!((d["00"] - 0.5).abs() < 1e-12);
        assert!((d["11"] - 0.5).abs() < 1e-12);
        let mid = parse("qubits 1\ncreg c 1\nmeasure 0 -> c[0]\nh 0\n").unwrap();
        assert!(ideal_distribution(&mid).is_none());
    }
}
