//! Experiment configuration: a flat TOML table.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qfp_core::analysis::{BoundMode, DeltaQConvention, NoiseModel, NoiseParams, RobustSettings};
use qfp_core::baseline::ClassicalCostModel;
use qfp_core::codes::{justesen_delta_bound, Backend, CodeSpec};
use qfp_core::protocol::{DoubleClickPolicy, InputRegime, ProtocolParams, ZeroClickPolicy};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Which mean photon number sets the click probability when dark counts
/// are weighed against signal clicks in the sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DilutionBasis {
    /// `eta * alpha^2`, the light that reaches the detectors.
    #[default]
    Detected,
    /// `alpha^2` as emitted, ignoring transmission loss.
    Source,
}

/// Default sweep: `10^3 .. 10^14`, one point per decade.
pub fn default_sweep() -> Vec<u64> {
    (3..=14).map(|e| 10u64.pow(e)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    // code
    pub backend: Backend,
    pub n: u64,
    pub c: f64,
    /// Codeword length for the repetition and random-linear backends.
    pub m: Option<u64>,
    /// Agreement bound for the random-linear backend; for the other
    /// backends it overrides the code's bound in the analysis.
    pub delta: Option<f64>,
    pub code_seed: u64,

    // channel and detectors
    pub alpha_sq: f64,
    pub eta: f64,
    pub nu: f64,
    pub p_dark: f64,

    // decision
    pub mode: BoundMode,
    pub delta_q_convention: DeltaQConvention,
    pub noise_model: NoiseModel,
    pub double_click_policy: DoubleClickPolicy,
    pub zero_click_policy: ZeroClickPolicy,

    // targets
    pub target_error: f64,
    pub eps_trace: f64,

    // classical reference
    pub classical_constant: f64,
    pub per_round_error: f64,

    // sweep
    pub sweep: Vec<u64>,
    /// Extra fraction on top of the asymptotic robust requirement for the
    /// fixed noisy `alpha^2` of the sweep.
    pub noisy_alpha_headroom: f64,
    pub dilution_basis: DilutionBasis,

    // simulation
    pub trials: u64,
    pub master_seed: u64,
    pub regime: InputRegime,

    // output
    pub output: Option<PathBuf>,
    pub format: OutputFormat,

    /// Published values to compare against, if any.
    pub reference_alpha_sq_ideal: Option<f64>,
    pub reference_alpha_sq_robust: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            backend: Backend::Justesen,
            n: 1024,
            c: 3.0,
            m: None,
            delta: None,
            code_seed: 0,
            alpha_sq: 88.8,
            eta: 1.0,
            nu: 1.0,
            p_dark: 0.0,
            mode: BoundMode::Ideal,
            delta_q_convention: DeltaQConvention::Printed,
            noise_model: NoiseModel::Approximate,
            double_click_policy: DoubleClickPolicy::Exclude,
            zero_click_policy: ZeroClickPolicy::Equal,
            target_error: 1e-6,
            eps_trace: 1e-6,
            classical_constant: 0.0,
            per_round_error: 0.25,
            sweep: default_sweep(),
            noisy_alpha_headroom: 0.1,
            dilution_basis: DilutionBasis::Detected,
            trials: 10_000,
            master_seed: 0,
            regime: InputRegime::WorstCase,
            output: None,
            format: OutputFormat::Csv,
            reference_alpha_sq_ideal: None,
            reference_alpha_sq_robust: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Checks every field against the invariants of the module that uses it.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            bail!("n must be at least 1");
        }
        match self.backend {
            Backend::Justesen => {
                justesen_delta_bound(self.c)?;
            }
            Backend::Repetition | Backend::RandomLinear => {
                if self.m.is_none() {
                    bail!("backend {:?} needs m", self.backend);
                }
            }
        }
        if self.backend == Backend::RandomLinear && self.delta.is_none() {
            bail!("backend random_linear needs delta");
        }
        if let Some(d) = self.delta {
            if !(0.0..1.0).contains(&d) {
                bail!("delta must lie in [0, 1), got {d}");
            }
        }
        self.noise().params(self.alpha_sq, 1)?;
        if !(self.target_error > 0.0 && self.target_error < 1.0) {
            bail!("target_error must lie in (0, 1), got {}", self.target_error);
        }
        if !(self.eps_trace > 0.0 && self.eps_trace < 2.0) {
            bail!("eps_trace must lie in (0, 2), got {}", self.eps_trace);
        }
        if !(self.per_round_error > 0.0 && self.per_round_error < 1.0) {
            bail!("per_round_error must lie in (0, 1), got {}", self.per_round_error);
        }
        if !self.classical_constant.is_finite() {
            bail!("classical_constant must be finite");
        }
        if !(self.noisy_alpha_headroom >= 0.0 && self.noisy_alpha_headroom.is_finite()) {
            bail!("noisy_alpha_headroom must be finite and >= 0");
        }
        if self.sweep.iter().any(|&n| n == 0) {
            bail!("sweep values must be at least 1");
        }
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        for (k, v) in [("reference_alpha_sq_ideal", self.reference_alpha_sq_ideal), ("reference_alpha_sq_robust", self.reference_alpha_sq_robust)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    bail!("{k} must be positive, got {v}");
                }
            }
        }
        Ok(())
    }

    pub fn noise(&self) -> NoiseParams<f64> {
        NoiseParams { eta: self.eta, nu: self.nu, p_dark: self.p_dark }
    }

    pub fn robust_settings(&self) -> RobustSettings {
        RobustSettings { convention: self.delta_q_convention, model: self.noise_model }
    }

    pub fn cost_model(&self) -> ClassicalCostModel<f64> {
        ClassicalCostModel { constant: self.classical_constant, per_round_error: self.per_round_error }
    }

    pub fn code_spec(&self) -> Result<CodeSpec> {
        let spec = match self.backend {
            Backend::Justesen => CodeSpec::justesen(self.n, self.c)?,
            Backend::Repetition => CodeSpec::repetition(self.n, self.m.unwrap_or(0))?,
            Backend::RandomLinear => {
                CodeSpec::random_linear(self.n, self.m.unwrap_or(0), self.delta.unwrap_or(0.0), self.code_seed)?
            }
        };
        Ok(spec)
    }

    /// `(m, delta)` for the configured code; falls back to `ceil(c n)` and
    /// the analytic bound when the code is too large to build.
    pub fn code_dims(&self) -> Result<(u64, f64)> {
        match self.code_spec() {
            Ok(spec) => Ok((spec.m, spec.delta)),
            Err(_) if self.backend == Backend::Justesen => Ok(analytic_dims(self.n, self.c)?),
            Err(e) => Err(e.into()),
        }
    }

    pub fn params(&self, m: u64) -> Result<ProtocolParams<f64>> {
        Ok(ProtocolParams::new(self.alpha_sq, self.eta, self.nu, self.p_dark, m)?)
    }
}

/// `m = ceil(c n)` and the Justesen agreement bound at rate `c`.
pub fn analytic_dims(n: u64, c: f64) -> Result<(u64, f64)> {
    Ok(((c * n as f64).ceil() as u64, justesen_delta_bound(c)?))
}
