//! Transmitted information against input size.

use anyhow::Result;
use qfp_core::analysis::{
    click_prob, dimension_report, ideal_error_bound, quantum_info_cost, required_mean_photon_number,
    robust_error_large_m, BoundMode, Horizon, NoiseParams,
};
use qfp_core::baseline::classical_cost;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{analytic_dims, DilutionBasis, ExperimentConfig, OutputFormat};
use crate::report::{fmt_f64, round12};

pub const SCHEMA: &str = "qfp-sweep-v1";

pub const COLUMNS: [&str; 12] = [
    "n",
    "m",
    "classical_bits",
    "quantum_ideal_bits",
    "quantum_noisy_bits",
    "alpha_sq_ideal",
    "alpha_sq_noisy",
    "delta_n",
    "eps_trace_achieved",
    "ideal_bound",
    "robust_bound",
    "status",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// The robust bound at the fixed noisy `alpha^2` misses the target.
    Infeasible,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::Infeasible => "infeasible",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: u64,
    pub m: u64,
    pub classical_bits: f64,
    pub quantum_ideal_bits: f64,
    pub quantum_noisy_bits: f64,
    pub alpha_sq_ideal: f64,
    /// The fixed noisy `alpha^2`, or the per-row requirement when the fixed
    /// value is infeasible (NaN if even that cannot be met).
    pub alpha_sq_noisy: f64,
    pub delta_n: u64,
    pub eps_trace_achieved: f64,
    pub ideal_bound: f64,
    /// Robust bound at the fixed noisy `alpha^2`.
    pub robust_bound: f64,
    pub status: RowStatus,
}

/// Parameters shared by every row.
#[derive(Clone, Copy, Debug)]
pub struct SweepSetup {
    pub delta: f64,
    pub alpha_sq_ideal: f64,
    pub alpha_sq_noisy_fixed: f64,
}

pub fn setup(cfg: &ExperimentConfig) -> Result<SweepSetup> {
    let (_, delta) = analytic_dims(1, cfg.c)?;
    let s = cfg.robust_settings();
    let alpha_sq_ideal = required_mean_photon_number(
        cfg.target_error,
        delta,
        &NoiseParams::ideal(),
        BoundMode::Ideal,
        Horizon::Asymptotic,
        s,
    )?;
    let robust = required_mean_photon_number(
        cfg.target_error,
        delta,
        &cfg.noise(),
        BoundMode::Robust,
        Horizon::Asymptotic,
        s,
    )?;
    Ok(SweepSetup { delta, alpha_sq_ideal, alpha_sq_noisy_fixed: robust * (1.0 + cfg.noisy_alpha_headroom) })
}

/// Noise parameters seen by the dark-count dilution model.
fn dilution_noise(cfg: &ExperimentConfig) -> NoiseParams<f64> {
    match cfg.dilution_basis {
        DilutionBasis::Detected => cfg.noise(),
        DilutionBasis::Source => NoiseParams { eta: 1.0, ..cfg.noise() },
    }
}

pub fn row(cfg: &ExperimentConfig, setup: &SweepSetup, n: u64) -> Result<SweepRow> {
    let (m, delta) = analytic_dims(n, cfg.c)?;
    let classical_bits = classical_cost(n, cfg.target_error, &cfg.cost_model())?;
    let a_ideal = setup.alpha_sq_ideal;
    let quantum_ideal_bits = quantum_info_cost(n, cfg.c, a_ideal, cfg.eps_trace)?;
    let dim = dimension_report(a_ideal, cfg.eps_trace, m)?;
    let ideal_bound = ideal_error_bound(m, click_prob(a_ideal, m), delta);

    let noise = dilution_noise(cfg);
    let fixed = setup.alpha_sq_noisy_fixed;
    let robust_bound =
        robust_error_large_m(noise.eta * fixed, m, delta, noise.nu, noise.p_dark, cfg.delta_q_convention);
    let (status, alpha_sq_noisy) = if robust_bound <= cfg.target_error {
        (RowStatus::Ok, fixed)
    } else {
        let needed = required_mean_photon_number(
            cfg.target_error,
            delta,
            &noise,
            BoundMode::Robust,
            Horizon::LargeM(m),
            cfg.robust_settings(),
        )
        .unwrap_or(f64::NAN);
        (RowStatus::Infeasible, needed)
    };
    let quantum_noisy_bits = if alpha_sq_noisy.is_finite() {
        quantum_info_cost(n, cfg.c, alpha_sq_noisy, cfg.eps_trace)?
    } else {
        f64::NAN
    };
    Ok(SweepRow {
        n,
        m,
        classical_bits,
        quantum_ideal_bits,
        quantum_noisy_bits,
        alpha_sq_ideal: a_ideal,
        alpha_sq_noisy,
        delta_n: dim.delta_n,
        eps_trace_achieved: dim.eps,
        ideal_bound,
        robust_bound,
        status,
    })
}

/// One row per sweep value, in input order.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let setup = setup(cfg)?;
    cfg.sweep.par_iter().map(|&n| row(cfg, &setup, n)).collect()
}

pub fn render(rows: &[SweepRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = format!("# {SCHEMA}\n{}\n", COLUMNS.join(","));
            for r in rows {
                let cells = [
                    r.n.to_string(),
                    r.m.to_string(),
                    fmt_f64(r.classical_bits),
                    fmt_f64(r.quantum_ideal_bits),
                    fmt_f64(r.quantum_noisy_bits),
                    fmt_f64(r.alpha_sq_ideal),
                    fmt_f64(r.alpha_sq_noisy),
                    r.delta_n.to_string(),
                    fmt_f64(r.eps_trace_achieved),
                    fmt_f64(r.ideal_bound),
                    fmt_f64(r.robust_bound),
                    r.status.as_str().to_string(),
                ];
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "m": r.m,
                        "classical_bits": round12(r.classical_bits),
                        "quantum_ideal_bits": round12(r.quantum_ideal_bits),
                        "quantum_noisy_bits": round12(r.quantum_noisy_bits),
                        "alpha_sq_ideal": round12(r.alpha_sq_ideal),
                        "alpha_sq_noisy": round12(r.alpha_sq_noisy),
                        "delta_n": r.delta_n,
                        "eps_trace_achieved": round12(r.eps_trace_achieved),
                        "ideal_bound": round12(r.ideal_bound),
                        "robust_bound": round12(r.robust_bound),
                        "status": r.status.as_str(),
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({ "schema": SCHEMA, "rows": rows })).expect("json");
            s.push('\n');
            s
        }
    }
}
