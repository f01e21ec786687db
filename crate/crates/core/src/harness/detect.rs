//! Closed-form versus simulated radiometer error rates.

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::detection::{fa_prob, md_prob, psi_params, DetectionSim};
use crate::model::PowerPolicy;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionRow {
    pub n: usize,
    pub theta: f64,
    pub p_fa_closed: f64,
    pub p_md_closed: f64,
    pub p_fa_emp: f64,
    pub p_md_emp: f64,
    pub trials: usize,
    pub seed: u64,
}

/// One row per `(n, theta)` pair of the detection settings.
pub fn detect_sim_rows(cfg: &ExperimentConfig) -> Result<Vec<DetectionRow>> {
    cfg.validate()?;
    let d = &cfg.detection;
    let noise = cfg.noise.to_linear()?;
    let pol = PowerPolicy::new(d.rho_s, 0.0, cfg.power())?;
    let psi = psi_params(&pol, cfg.geometry.d_aw, cfg.geometry.alpha);
    let sigma2_w = noise.sigma2_w;
    let thetas = d
        .thetas
        .clone()
        .unwrap_or_else(|| (0..5).map(|k| sigma2_w + 0.75 * k as f64 * psi.psi1).collect());

    let mut rows = Vec::with_capacity(d.n.len() * thetas.len());
    for &n in &d.n {
        let sim = DetectionSim {
            n,
            trials: d.trials,
            policy: &pol,
            geometry: &cfg.geometry,
            noise: &noise,
            seed: cfg.seed,
        };
        for (&theta, emp) in thetas.iter().zip(sim.run(&thetas)) {
            rows.push(DetectionRow {
                n,
                theta,
                p_fa_closed: fa_prob(theta, sigma2_w, psi.psi0),
                p_md_closed: md_prob(theta, sigma2_w, psi.psi1),
                p_fa_emp: emp.p_fa,
                p_md_emp: emp.p_md,
                trials: d.trials,
                seed: cfg.seed,
            });
        }
    }
    Ok(rows)
}

/// Detection rows rendered as CSV text.
pub fn detect_sim_command(cfg: &ExperimentConfig) -> Result<String> {
    let mut buf = Vec::new();
    super::write_csv(&detect_sim_rows(cfg)?, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}
