//! Time-sharing baseline: an arriving URLLC message punctures its whole
//! mini-slot, and the eMBB codeword is decoded from the remaining channel
//! uses with the puncturing pattern known at the receiver.

use crate::bounds::{assemble_qblock, clamp01, compensated_sum, k_ln, urllc_from_qblock, BoundOptions, QBlock, UrllcParts};
use crate::model::{derive, PowerSplit, SystemConfig, Thresholds};
use crate::specfn::{gamma_ratio_half, ln_binomial, LogValue};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// eMBB bound contribution for k punctured mini-slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TsTerm {
    pub k: u64,
    pub residual_len: u64,
    pub weight: f64,
    pub mu: Option<f64>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub bound: f64,
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSharingReport {
    #[serde(rename = "eps_U_ts_raw")]
    pub eps_u_ts_raw: f64,
    #[serde(rename = "eps_U_ts")]
    pub eps_u_ts: f64,
    pub eps_e_ts_raw: f64,
    pub eps_e_ts: f64,
    pub qblock: QBlock,
    pub per_k: Vec<TsTerm>,
}

/// Cached state for evaluating the baseline at many thresholds.
#[derive(Clone, Debug)]
pub struct TsEvaluator {
    cfg: SystemConfig,
    opts: BoundOptions,
    u: f64,
    c_u: f64,
    mu_u_base: f64,
    mu_u_tilde_base: f64,
    ln_j: f64,
    ln_j_tilde: f64,
    /// (residual length, μ + γ_e, Markov numerator) per k.
    per_k: Vec<(u64, f64, f64)>,
}

impl TsEvaluator {
    pub fn new(cfg: &SystemConfig, opts: BoundOptions) -> Result<Self> {
        cfg.validate()?;
        let split = PowerSplit { alpha: 0.0, beta_e: 0.0, beta_u: 1.0, delta_b: 0.0 };
        let d = derive(cfg, &split)?;
        let h2 = cfg.channel_gain * cfg.channel_gain;
        let p = cfg.power;
        let n = cfg.n_u as f64;
        let s2 = d.sigma2;
        let s32 = d.sigma3_2;

        // Without superposed eMBB interference only the output-density
        // mismatch between the sphere codebook and Q_Y remains.
        let ln_b = 0.5 * (8.0 * (1.0 + 2.0 * h2 * p)).ln() - (27.0 * PI.sqrt() * (1.0 + h2 * p)).ln();
        let ln_j_tilde = (27.0 * PI.sqrt()).ln() + n * h2 * p - 2f64.ln() - (n - 2.0) * h2.ln() - 0.5 * 8f64.ln();
        let c_u = 2.0 * s2 * s32 / (h2 * (s2 - s32));
        let base = n / 2.0 * (s2 / s32).ln();
        let mu_u_base = c_u * (base + ln_b) + s32 / (s2 - s32) * n * p;
        let mu_u_tilde_base = c_u * (base + ln_j_tilde) + s32 / (s2 - s32) * n * p;

        let eta = d.eta;
        let cg = 2f64.sqrt() * gamma_ratio_half(cfg.n_u)?;
        let snp = (n * p).sqrt();
        let per_k = (0..=eta)
            .map(|k| {
                let m = cfg.n_e - k * cfg.n_u;
                let r = eta - k;
                let unpunct = if opts.appendix_mu { (r + 1) as f64 } else { r as f64 };
                let mf = m as f64;
                let mu_base = mf / 2.0 * s2.ln() - unpunct / (2.0 * s2) * n * p + r as f64 * ln_b;
                let expect = mf * (s2 - 1.0) / (2.0 * s2) + (r + 1) as f64 * snp / s2 * cg;
                (m, mu_base, expect)
            })
            .collect();
        Ok(TsEvaluator {
            cfg: cfg.clone(),
            opts,
            u: d.u,
            c_u,
            mu_u_base,
            mu_u_tilde_base,
            ln_j: ln_b,
            ln_j_tilde,
            per_k,
        })
    }

    pub fn options(&self) -> BoundOptions {
        self.opts
    }

    pub fn q_block(&self, gamma_u: f64) -> Result<QBlock> {
        let parts = UrllcParts {
            n_u: self.cfg.n_u,
            u: self.u,
            mu_u: self.mu_u_base - self.c_u * gamma_u,
            mu_u_tilde: self.mu_u_tilde_base - self.c_u * gamma_u,
            log_j_u: LogValue::from_ln(self.ln_j),
            log_j_u_tilde: LogValue::from_ln(self.ln_j_tilde),
            zeta: 1.0,
            rho: self.cfg.rho,
            l_v: 1,
            codewords: self.cfg.l_u as f64,
        };
        assemble_qblock(&parts, gamma_u)
    }

    /// URLLC error bound (raw, clamped) at γ_U.
    pub fn urllc(&self, gamma_u: f64) -> Result<(f64, f64, QBlock)> {
        let qb = self.q_block(gamma_u)?;
        let c = urllc_from_qblock(self.cfg.rho, &qb)?;
        Ok((c.raw, c.value, qb))
    }

    fn terms(&self, gamma_e: f64) -> Vec<TsTerm> {
        let eta = self.cfg.eta();
        let rho = self.cfg.rho;
        let union = if self.cfg.l_e <= 1 { 0.0 } else { (self.cfg.l_e - 1) as f64 * (-gamma_e).exp() };
        self.per_k
            .iter()
            .enumerate()
            .map(|(k, &(m, mu_base, expect))| {
                let k = k as u64;
                let weight = (ln_binomial(eta, k) + k_ln(k, rho) + k_ln(eta - k, 1.0 - rho)).exp();
                if m == 0 {
                    return TsTerm { k, residual_len: 0, weight, mu: None, t: None, bound: 1.0, vacuous: true };
                }
                let mu = mu_base - gamma_e;
                if !(mu > 0.0) {
                    return TsTerm { k, residual_len: m, weight, mu: Some(mu), t: None, bound: 1.0, vacuous: true };
                }
                let t = expect / mu + union;
                TsTerm { k, residual_len: m, weight, mu: Some(mu), t: Some(t), bound: clamp01(t), vacuous: false }
            })
            .collect()
    }

    /// eMBB bound (raw, clamped) at γ_e.
    pub fn embb(&self, gamma_e: f64) -> Result<(f64, f64)> {
        let raw = compensated_sum(self.terms(gamma_e).iter().map(|t| t.weight * t.bound));
        if !raw.is_finite() {
            return Err(Error::NonFinite("eps_e_ts".into()));
        }
        Ok((raw, clamp01(raw)))
    }

    pub fn report(&self, thr: &Thresholds) -> Result<TimeSharingReport> {
        thr.validate()?;
        let (eps_u_ts_raw, eps_u_ts, qblock) = self.urllc(thr.gamma_u)?;
        let per_k = self.terms(thr.gamma_e);
        let raw = compensated_sum(per_k.iter().map(|t| t.weight * t.bound));
        if !raw.is_finite() {
            return Err(Error::NonFinite("eps_e_ts".into()));
        }
        Ok(TimeSharingReport { eps_u_ts_raw, eps_u_ts, eps_e_ts_raw: raw, eps_e_ts: clamp01(raw), qblock, per_k })
    }
}

/// Time-sharing bounds at fixed thresholds (γ̃_e is unused).
pub fn time_sharing_bound(cfg: &SystemConfig, thr: &Thresholds, opts: BoundOptions) -> Result<TimeSharingReport> {
    TsEvaluator::new(cfg, opts)?.report(thr)
}
