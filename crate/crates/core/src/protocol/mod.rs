//! The referee's interference measurement.
//!
//! Slot `i` interferes Alice's pulse `(-1)^{E(x)_i} alpha/sqrt(m)` with Bob's
//! `(-1)^{E(x')_i} alpha/sqrt(m)` on a balanced beam splitter. All light exits
//! the port that matches the relative parity: detector "0" when the bits
//! agree, detector "1" when they differ. Noise enters through three knobs:
//! transmittance `eta` (attenuates the mean photon number), visibility `nu`
//! (a photon click lands on the wrong detector with probability `1 - nu`),
//! and a per-detector dark-count probability `p_dark`.

mod enumerate;
mod exact;
mod simulate;

use serde::{Deserialize, Serialize};

pub use enumerate::{enumerate_error_probabilities, MAX_ENUMERATION_M};
pub use exact::{exact_error_probability, ExactOptions, SlotLaw, DEFAULT_EXACT_CAP};
pub use simulate::{
    estimate_error_rate, simulate_run, simulate_trials, slot_outcome, worst_case_pair, ErrorEstimate, InputRegime,
    SimulationSummary, SlotSampler,
};

use crate::{Error, Real, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams<T> {
    /// Source mean photon number `|alpha|^2` of each fingerprint state.
    pub alpha_sq: T,
    /// Combined channel and detector transmittance.
    pub eta: T,
    /// Interferometer visibility.
    pub nu: T,
    /// Dark-count probability per detector per slot.
    pub p_dark: T,
    /// Number of time-bin modes (codeword length).
    pub m: u64,
}

impl<T: Real> ProtocolParams<T> {
    pub fn new(alpha_sq: T, eta: T, nu: T, p_dark: T, m: u64) -> Result<Self> {
        let p = Self { alpha_sq, eta, nu, p_dark, m };
        p.validate()?;
        Ok(p)
    }

    /// Noiseless, lossless channel.
    pub fn ideal(alpha_sq: T, m: u64) -> Result<Self> {
        Self::new(alpha_sq, T::one(), T::one(), T::zero(), m)
    }

    pub fn validate(&self) -> Result<()> {
        let (zero, one, half) = (T::zero(), T::one(), T::lit(0.5));
        if !(self.alpha_sq >= zero) || self.alpha_sq.is_nan() {
            return Err(Error::param(format!("alpha_sq must be >= 0, got {}", self.alpha_sq)));
        }
        if !(self.eta > zero && self.eta <= one) {
            return Err(Error::param(format!("eta must lie in (0, 1], got {}", self.eta)));
        }
        if !(self.nu > half && self.nu <= one) {
            return Err(Error::param(format!("nu must lie in (1/2, 1], got {}", self.nu)));
        }
        if !(self.p_dark >= zero && self.p_dark < one) {
            return Err(Error::param(format!("p_dark must lie in [0, 1), got {}", self.p_dark)));
        }
        if self.m == 0 {
            return Err(Error::param("m must be at least 1"));
        }
        Ok(())
    }

    /// `eta * |alpha|^2`.
    pub fn detected_alpha_sq(&self) -> T {
        self.eta * self.alpha_sq
    }

    /// Probability that a slot produces a photon click.
    pub fn click_prob(&self) -> T {
        crate::analysis::click_prob(self.detected_alpha_sq(), self.m)
    }

    pub fn with_alpha_sq(self, alpha_sq: T) -> Self {
        Self { alpha_sq, ..self }
    }

    pub fn with_m(self, m: u64) -> Self {
        Self { m, ..self }
    }

    pub fn to_f64(&self) -> ProtocolParams<f64> {
        ProtocolParams {
            alpha_sq: self.alpha_sq.to_f64().unwrap(),
            eta: self.eta.to_f64().unwrap(),
            nu: self.nu.to_f64().unwrap(),
            p_dark: self.p_dark.to_f64().unwrap(),
            m: self.m,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlotOutcome {
    None,
    Zero,
    One,
    Double,
}

/// Per-run detector statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunTally {
    /// Slots with a single click on detector "0".
    pub zeros: u64,
    /// Slots with exactly one click.
    pub clicks: u64,
    pub no_click: u64,
    pub double_click: u64,
}

impl RunTally {
    pub fn record(&mut self, outcome: SlotOutcome) {
        match outcome {
            SlotOutcome::None => self.no_click += 1,
            SlotOutcome::Zero => {
                self.zeros += 1;
                self.clicks += 1;
            }
            SlotOutcome::One => self.clicks += 1,
            SlotOutcome::Double => self.double_click += 1,
        }
    }

    /// Single clicks on detector "1".
    pub fn ones(&self) -> u64 {
        self.clicks - self.zeros
    }

    pub fn slots(&self) -> u64 {
        self.clicks + self.no_click + self.double_click
    }

    /// Observed fraction of "0" outcomes; `None` without clicks.
    pub fn f0(&self) -> Option<f64> {
        (self.clicks > 0).then(|| self.zeros as f64 / self.clicks as f64)
    }

    pub fn accumulate(&mut self, other: &RunTally) {
        self.zeros += other.zeros;
        self.clicks += other.clicks;
        self.no_click += other.no_click;
        self.double_click += other.double_click;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Different,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionRule {
    /// Different iff any "1" click.
    Ideal,
    /// Equal iff `f0 > q_E - delta_q`.
    Robust,
}

/// How a slot where both detectors fire is scored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DoubleClickPolicy {
    /// Contributes to neither `Z` nor `C`.
    #[default]
    Exclude,
    /// Counts as a "1" observation under the ideal rule.
    CountOne,
}

impl std::str::FromStr for DoubleClickPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exclude" => Ok(Self::Exclude),
            "count-one" | "count_one" => Ok(Self::CountOne),
            other => Err(Error::param(format!("unknown double-click policy {other:?}"))),
        }
    }
}

/// Verdict of the robust rule when no single clicks were observed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroClickPolicy {
    #[default]
    Equal,
    Different,
}

impl std::str::FromStr for ZeroClickPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" => Ok(Self::Equal),
            "different" => Ok(Self::Different),
            other => Err(Error::param(format!("unknown zero-click policy {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub rule: DecisionRule,
    pub inconclusive: bool,
}

/// Acceptance threshold `q_E - delta_q` of the robust rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustThreshold {
    pub q_e: f64,
    pub delta_q: f64,
}

impl RobustThreshold {
    pub fn new(q_e: f64, delta_q: f64) -> Result<Self> {
        if !(0.0 <= delta_q && delta_q <= q_e && q_e <= 1.0) {
            return Err(Error::param(format!(
                "robust threshold needs 0 <= delta_q <= q_E <= 1, got q_E = {q_e}, delta_q = {delta_q}"
            )));
        }
        Ok(Self { q_e, delta_q })
    }

    pub fn cutoff(&self) -> f64 {
        self.q_e - self.delta_q
    }

    /// `zeros / clicks > cutoff`, for `clicks > 0`.
    #[inline]
    pub fn accepts(&self, zeros: u64, clicks: u64) -> bool {
        zeros as f64 / clicks as f64 > self.cutoff()
    }
}

pub fn decide_ideal(tally: &RunTally, policy: DoubleClickPolicy) -> Decision {
    let doubles = match policy {
        DoubleClickPolicy::Exclude => 0,
        DoubleClickPolicy::CountOne => tally.double_click,
    };
    let verdict = if tally.ones() + doubles > 0 { Verdict::Different } else { Verdict::Equal };
    Decision { verdict, rule: DecisionRule::Ideal, inconclusive: false }
}

pub fn decide_robust(tally: &RunTally, q_e: f64, delta_q: f64, zero_click: ZeroClickPolicy) -> Result<Decision> {
    let threshold = RobustThreshold::new(q_e, delta_q)?;
    Ok(decide_robust_with(tally, &threshold, zero_click))
}

pub fn decide_robust_with(tally: &RunTally, threshold: &RobustThreshold, zero_click: ZeroClickPolicy) -> Decision {
    if tally.clicks == 0 {
        let verdict = match zero_click {
            ZeroClickPolicy::Equal => Verdict::Equal,
            ZeroClickPolicy::Different => Verdict::Different,
        };
        return Decision { verdict, rule: DecisionRule::Robust, inconclusive: true };
    }
    let verdict = if threshold.accepts(tally.zeros, tally.clicks) { Verdict::Equal } else { Verdict::Different };
    Decision { verdict, rule: DecisionRule::Robust, inconclusive: false }
}

/// A configured decision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Referee {
    pub rule: DecisionRule,
    pub threshold: Option<RobustThreshold>,
    pub double_click: DoubleClickPolicy,
    pub zero_click: ZeroClickPolicy,
}

impl Referee {
    pub fn ideal() -> Self {
        Self {
            rule: DecisionRule::Ideal,
            threshold: None,
            double_click: DoubleClickPolicy::default(),
            zero_click: ZeroClickPolicy::default(),
        }
    }

    pub fn robust(q_e: f64, delta_q: f64) -> Result<Self> {
        Ok(Self {
            rule: DecisionRule::Robust,
            threshold: Some(RobustThreshold::new(q_e, delta_q)?),
            double_click: DoubleClickPolicy::default(),
            zero_click: ZeroClickPolicy::default(),
        })
    }

    pub fn with_double_click(self, double_click: DoubleClickPolicy) -> Self {
        Self { double_click, ..self }
    }

    pub fn with_zero_click(self, zero_click: ZeroClickPolicy) -> Self {
        Self { zero_click, ..self }
    }

    pub fn decide(&self, tally: &RunTally) -> Decision {
        match self.rule {
            DecisionRule::Ideal => decide_ideal(tally, self.double_click),
            DecisionRule::Robust => decide_robust_with(
                tally,
                self.threshold.as_ref().expect("robust referee carries a threshold"),
                self.zero_click,
            ),
        }
    }
}
