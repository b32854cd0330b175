//! Closed-form residual excitation after repeated active resets.
//!
//! One reset reads the qubit and applies a conditional X to the read value.
//! Tracking only whether the qubit is excited, each reset is a two-state
//! Markov step:
//!
//! * excited, read as 0 (`read_1to0`): no X, stays excited
//! * excited, read as 1, X fails (`condx`): stays excited
//! * ground, read as 1 (`read_0to1`), X succeeds: re-excited
//!
//! so `P(1→1) = read_1to0 + (1 − read_1to0)·condx` and
//! `P(0→1) = read_0to1·(1 − condx)`. The re-excitation branch is what makes
//! extra resets stop paying off: the chain settles at a nonzero floor.

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticsError {
    #[error("probability {name} = {value} is outside [0, 1]")]
    BadProbability { name: &'static str, value: f64 },
    #[error("effective reset fidelity is defined for exactly one reset, got {0}")]
    NotSingleReset(u32),
    #[error("at least one reset is required")]
    NoResets,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResetChannel {
    pub read_1to0: f64,
    pub read_0to1: f64,
    pub condx: f64,
    pub resets: u32,
}

impl ResetChannel {
    pub fn new(read_1to0: f64, read_0to1: f64, condx: f64, resets: u32) -> Self {
        ResetChannel {
            read_1to0,
            read_0to1,
            condx,
            resets,
        }
    }

    fn check(&self) -> Result<(), AnalyticsError> {
        for (name, value) in [
            ("read_1to0", self.read_1to0),
            ("read_0to1", self.read_0to1),
            ("condx", self.condx),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(AnalyticsError::BadProbability { name, value });
            }
        }
        Ok(())
    }

    /// Probability an excited qubit is still excited after one reset.
    pub fn stay_excited(&self) -> f64 {
        self.read_1to0 + (1.0 - self.read_1to0) * self.condx
    }

    /// Probability a grounded qubit is excited by one reset.
    pub fn re_excite(&self) -> f64 {
        self.read_0to1 * (1.0 - self.condx)
    }

    /// Fixed point of the chain.
    pub fn stationary_excitation(&self) -> f64 {
        let p01 = self.re_excite();
        let denom = 1.0 - self.stay_excited() + p01;
        if denom == 0.0 {
            // P(1→1) = 1 and P(0→1) = 0: every state is absorbing.
            1.0
        } else {
            p01 / denom
        }
    }
}

/// `P(|0⟩ after one reset | |1⟩ before)` = `(1 − read_1to0)(1 − condx)`.
pub fn effective_reset_fidelity(ch: &ResetChannel) -> Result<f64, AnalyticsError> {
    ch.check()?;
    if ch.resets != 1 {
        return Err(AnalyticsError::NotSingleReset(ch.resets));
    }
    Ok((1.0 - ch.read_1to0) * (1.0 - ch.condx))
}

/// Probability the qubit is excited after `ch.resets` resets, starting
/// excited.
pub fn residual_after_k(ch: &ResetChannel) -> Result<f64, AnalyticsError> {
    ch.check()?;
    if ch.resets == 0 {
        return Err(AnalyticsError::NoResets);
    }
    let (p11, p01) = (ch.stay_excited(), ch.re_excite());
    let mut excited = 1.0;
    for _ in 0..ch.resets {
        excited = excited * p11 + (1.0 - excited) * p01;
    }
    Ok(excited)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults(k: u32) -> ResetChannel {
        ResetChannel::new(0.0326, 0.0326, 0.0020, k)
    }

    #[test]
    fn fidelity_examples() {
        let f = effective_reset_fidelity(&defaults(1)).unwrap();
        assert!((f - 0.96547).abs() < 1e-4, "{f}");
        assert!((f - 0.9674 * 0.9980).abs() < 1e-15);
        assert_eq!(
            effective_reset_fidelity(&ResetChannel::new(0.0, 0.0, 0.0, 1)).unwrap(),
            1.0
        );
        let f = effective_reset_fidelity(&ResetChannel::new(0.10, 0.10, 0.05, 1)).unwrap();
        assert!((f - 0.855).abs() < 1e-12);
    }

    #[test]
    fn fidelity_needs_one_reset() {
        assert_eq!(
            effective_reset_fidelity(&defaults(2)),
            Err(AnalyticsError::NotSingleReset(2))
        );
    }

    #[test]
    fn single_reset_residual_is_complement() {
        let r = residual_after_k(&defaults(1)).unwrap();
        let f = effective_reset_fidelity(&defaults(1)).unwrap();
        assert!((r - 0.03453).abs() < 1e-5, "{r}");
        assert!((r + f - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perfect_gates_ground_immediately() {
        for k in [1, 5, 40] {
            assert_eq!(
                residual_after_k(&ResetChannel::new(0.0, 0.0, 0.0, k)).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn hand_computed_two_steps() {
        // p11 = 0.1 + 0.9*0.05 = 0.145, p01 = 0.2*0.95 = 0.19
        let ch = ResetChannel::new(0.1, 0.2, 0.05, 2);
        let want = 0.145 * 0.145 + 0.855 * 0.19;
        assert!((residual_after_k(&ch).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn converges_to_stationary_floor() {
        let ch = defaults(1);
        let floor = ch.stationary_excitation();
        assert!((floor - 0.0326).abs() < 1e-12, "{floor}");
        let mut prev = f64::INFINITY;
        for k in 1..=31 {
            let r = residual_after_k(&ResetChannel { resets: k, ..ch }).unwrap();
            assert!(r <= prev + 1e-12);
            assert!(r >= floor - 1e-12);
            prev = r;
        }
        assert!((prev - floor).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(residual_after_k(&ResetChannel::new(1.2, 0.0, 0.0, 1)).is_err());
        assert_eq!(
            residual_after_k(&defaults(0)),
            Err(AnalyticsError::NoResets)
        );
    }
}
