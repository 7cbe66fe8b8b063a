//! System parameters, the power split and the derived variances shared by
//! the bounds, the baseline, the simulator and the optimizer.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Physical and protocol constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Average power limit P.
    pub power: f64,
    /// Channel coefficient h.
    pub channel_gain: f64,
    /// eMBB blocklength n_e.
    pub n_e: u64,
    /// URLLC mini-slot length n_U.
    pub n_u: u64,
    /// Per-mini-slot URLLC arrival probability.
    pub rho: f64,
    pub l_e: u64,
    pub l_u: u64,
    /// DPC bins per URLLC message.
    pub l_v: u64,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.power > 0.0 && self.power.is_finite()) {
            return bad(format!("power must be positive and finite, got {}", self.power));
        }
        if !(self.channel_gain > 0.0 && self.channel_gain.is_finite()) {
            return bad(format!("channel_gain must be positive and finite, got {}", self.channel_gain));
        }
        if self.n_u == 0 || self.n_e == 0 {
            return bad("blocklengths n_e and n_u must be >= 1".into());
        }
        if self.n_u > self.n_e {
            return bad(format!("n_u = {} exceeds n_e = {}", self.n_u, self.n_e));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return bad(format!("rho must lie in [0, 1], got {}", self.rho));
        }
        if self.l_e == 0 || self.l_u == 0 || self.l_v == 0 {
            return bad("message and bin counts must be >= 1".into());
        }
        Ok(())
    }

    /// Number of full mini-slots η = ⌊n_e/n_U⌋.
    pub fn eta(&self) -> u64 {
        self.n_e / self.n_u
    }

    pub fn tail_len(&self) -> u64 {
        self.n_e - self.eta() * self.n_u
    }
}

/// Scheme parameters: DPC inflation α, power fractions and shell width δ_b.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub alpha: f64,
    pub beta_e: f64,
    pub beta_u: f64,
    pub delta_b: f64,
}

impl PowerSplit {
    /// Split with β_U = 1 − β_e.
    pub fn new(alpha: f64, beta_e: f64, delta_b: f64) -> Self {
        PowerSplit { alpha, beta_e, beta_u: 1.0 - beta_e, delta_b }
    }

    /// Split whose shell width is a fraction of n_U β_U P.
    pub fn with_delta_fraction(cfg: &SystemConfig, alpha: f64, beta_e: f64, frac: f64) -> Self {
        let beta_u = 1.0 - beta_e;
        PowerSplit { alpha, beta_e, beta_u, delta_b: frac * cfg.n_u as f64 * beta_u * cfg.power }
    }

    pub fn beta_v(&self) -> f64 {
        self.beta_u + self.alpha * self.alpha * self.beta_e
    }

    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSplit(m));
        for (name, v) in [("alpha", self.alpha), ("beta_e", self.beta_e), ("beta_u", self.beta_u)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if (self.beta_u + self.beta_e - 1.0).abs() > 1e-12 {
            return bad(format!(
                "power fractions must satisfy beta_u + beta_e = 1, got {} + {}",
                self.beta_u, self.beta_e
            ));
        }
        let cap = cfg.n_u as f64 * self.beta_u * cfg.power;
        if !(self.delta_b > 0.0 && self.delta_b < cap) {
            return bad(format!("delta_b must lie in (0, n_u*beta_u*P = {cap}), got {}", self.delta_b));
        }
        Ok(())
    }
}

/// Decoder thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub gamma_u: f64,
    pub gamma_e: f64,
    pub gamma_e_tilde: f64,
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gamma_u", self.gamma_u), ("gamma_e", self.gamma_e), ("gamma_e_tilde", self.gamma_e_tilde)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidThresholds(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Variances and geometry constants determined by a config and a split.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Derived {
    pub beta_v: f64,
    /// σ² = h²P + 1.
    pub sigma2: f64,
    /// σ₂² = h²β_v P + 1.
    pub sigma2_2: f64,
    /// σ₃² = h²(1−α)²β_e P + 1.
    pub sigma3_2: f64,
    pub u: f64,
    pub tau: f64,
    pub eta: u64,
    pub tail_len: u64,
}

pub fn derive(cfg: &SystemConfig, split: &PowerSplit) -> Result<Derived> {
    let h2 = cfg.channel_gain * cfg.channel_gain;
    let p = cfg.power;
    let n = cfg.n_u as f64;
    let a1 = 1.0 - split.alpha;
    let beta_v = split.beta_v();
    let sigma2 = h2 * p + 1.0;
    let sigma2_2 = h2 * beta_v * p + 1.0;
    let sigma3_2 = h2 * a1 * a1 * split.beta_e * p + 1.0;
    if sigma2 == sigma3_2 {
        return Err(Error::DegenerateSplit(format!(
            "sigma^2 equals sigma_3^2 (alpha = {}, beta_e = {})",
            split.alpha, split.beta_e
        )));
    }
    let (sbu, sbe, sbv) = (split.beta_u.sqrt(), split.beta_e.sqrt(), beta_v.sqrt());
    let snp = (n * p).sqrt();
    let u = 2.0 * snp * (sigma3_2 * (sbu + sbe) + sigma2 * sbe * a1) / (cfg.channel_gain * (sigma2 - sigma3_2));
    let tau = snp * (sbv * (sigma2 + sigma2_2) + a1 * sbe * sigma2_2) / (sigma2 * sigma2_2);
    Ok(Derived { beta_v, sigma2, sigma2_2, sigma3_2, u, tau, eta: cfg.eta(), tail_len: cfg.tail_len() })
}

/// The pair (λ(x), λ̃(x)) = x/2 + u²/4 ∓ (u/2)√(x + u²/4).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaPair {
    pub lambda: f64,
    pub lambda_tilde: f64,
    /// Set when x + u²/4 < 0: the chi-square event is empty and both values
    /// are the sentinel 0, which makes every G(·, λ) term vanish.
    pub empty: bool,
}

pub fn lambda_pair(x: f64, u: f64) -> LambdaPair {
    let d = x + u * u / 4.0;
    if !(d >= 0.0) {
        return LambdaPair { lambda: 0.0, lambda_tilde: 0.0, empty: true };
    }
    let r = d.sqrt();
    let a = r - u / 2.0;
    let b = r + u / 2.0;
    // 2λ = (√d − u/2)², written as a square to avoid cancellation.
    LambdaPair { lambda: 0.5 * a * a, lambda_tilde: 0.5 * b * b, empty: false }
}
