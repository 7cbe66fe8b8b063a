//! Per-k and per-(k, k̃) bracket terms of the eMBB bounds.

use super::{clamp01, compensated_sum, KWeights};
use crate::specfn::LogValue;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// One term of the inner SIC mixture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SicInner {
    pub k_tilde: u64,
    #[serde(rename = "log_J_e_tilde")]
    pub log_j_e_tilde: LogValue,
    pub mu_tilde: f64,
    pub nu: f64,
    pub weight: f64,
    /// μT/μ̃ − ν before clamping; 1 when flagged vacuous.
    pub bracket_raw: f64,
    pub bracket: f64,
    pub vacuous: bool,
}

/// Everything computed for one value of k = |B_dt|.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerKTerms {
    pub k: u64,
    #[serde(rename = "log_J_e")]
    pub log_j_e: LogValue,
    pub mu: f64,
    /// Markov term T; absent when μ ≤ 0.
    #[serde(rename = "T")]
    pub t: Option<f64>,
    #[serde(rename = "Delta_raw")]
    pub delta_raw: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    pub tin_weight: f64,
    pub tin_bracket_raw: f64,
    pub tin_bracket: f64,
    pub tin_vacuous: bool,
    pub sic_weight: f64,
    pub sic_bracket_raw: f64,
    pub sic_bracket: f64,
    pub sic_inner: Vec<SicInner>,
}

/// Returns (raw, clamped, vacuous) for 1 − Δ + T.
pub(crate) fn tin_bracket(mu: f64, expect: f64, union: f64, delta: f64) -> (f64, f64, bool) {
    if !(mu > 0.0) || !mu.is_finite() {
        return (1.0, 1.0, true);
    }
    let raw = 1.0 - delta + expect / mu + union;
    (raw, clamp01(raw), false)
}

/// Returns (raw, clamped, vacuous, ν) for μT/μ̃ − ν at one k̃.
pub(crate) fn sic_inner(mu: f64, mu_t_num: f64, mu_tilde: f64, kt: f64, nu_coef: f64, union_t: f64) -> (f64, f64, bool, f64) {
    if !(mu_tilde > 0.0) || !mu_tilde.is_finite() || !mu.is_finite() {
        return (1.0, 1.0, true, f64::NAN);
    }
    let nu = kt / mu_tilde * nu_coef + if union_t == 0.0 { 0.0 } else { union_t * (mu / mu_tilde + 1.0) };
    let raw = mu_t_num / mu_tilde - nu;
    (raw, clamp01(raw), false, nu)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn build_per_k(
    k: u64,
    log_j_e: LogValue,
    mu: f64,
    expect: f64,
    union: f64,
    log_j_e_tilde: &[LogValue],
    mu_tilde_base: &[f64],
    gamma_e_tilde: f64,
    nu_coef: f64,
    union_t: f64,
    w: &KWeights,
) -> Result<PerKTerms> {
    let ku = k as usize;
    let (tin_raw, tin_cl, tin_vac) = tin_bracket(mu, expect, union, w.delta[ku]);
    let t = if tin_vac { None } else { Some(expect / mu + union) };
    let mu_t_num = expect + if union == 0.0 { 0.0 } else { mu * union };
    let mut inner = Vec::with_capacity(ku + 1);
    for (kt, (lj, mtb)) in log_j_e_tilde.iter().zip(mu_tilde_base).enumerate() {
        let mu_tilde = mtb - gamma_e_tilde;
        let (raw, cl, vac, nu) = sic_inner(mu, mu_t_num, mu_tilde, kt as f64, nu_coef, union_t);
        if raw.is_nan() {
            return Err(Error::NonFinite(format!("SIC inner term at k={k}, k_tilde={kt}")));
        }
        inner.push(SicInner {
            k_tilde: kt as u64,
            log_j_e_tilde: *lj,
            mu_tilde,
            nu,
            weight: w.inner[ku][kt],
            bracket_raw: raw,
            bracket: cl,
            vacuous: vac,
        });
    }
    let sic_raw = 1.0 - w.delta[ku] + compensated_sum(inner.iter().map(|s| s.weight * s.bracket));
    Ok(PerKTerms {
        k,
        log_j_e,
        mu,
        t,
        delta_raw: w.delta_raw[ku],
        delta: w.delta[ku],
        tin_weight: w.tin[ku],
        tin_bracket_raw: tin_raw,
        tin_bracket: tin_cl,
        tin_vacuous: tin_vac,
        sic_weight: w.sic[ku],
        sic_bracket_raw: sic_raw,
        sic_bracket: clamp01(sic_raw),
        sic_inner: inner,
    })
}
