//! Upper bounds on the URLLC error probability and on the eMBB error
//! probability under the TIN and SIC decoders.
//!
//! [`Evaluator`] caches everything that depends only on the configuration
//! and the power split (variances, ζ, the J-factors and the threshold-free
//! parts of μ and μ̃), so that sweeping the thresholds is cheap. The free
//! functions [`zeta`], [`q_quantities`], [`urllc_bound`], [`tin_bound`],
//! [`sic_bound`] and [`evaluate`] are thin wrappers around it.

mod terms;

use crate::model::{derive, lambda_pair, Derived, PowerSplit, SystemConfig, Thresholds};
use crate::specfn::{gamma_ratio_half, ln_binomial, reg_gamma_upper, sphere_coord_prob_tol, LogValue};
use crate::specfn::quad::QuadTolerance;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub use terms::{PerKTerms, SicInner};

/// Evaluation switches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundOptions {
    /// Use (η+1−k) instead of (η−k) for the unpunctured-block power term in μ.
    pub appendix_mu: bool,
}

/// URLLC-side probabilities shared by all three bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QBlock {
    pub zeta: f64,
    #[serde(rename = "rho_U")]
    pub rho_u: f64,
    pub q: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
    /// Per-codeword miss probability upper bound at threshold μ_U.
    pub miss_upper: f64,
    /// Per-codeword miss probability lower bound at threshold μ̃_U.
    pub miss_lower: f64,
    /// 1 − q2, evaluated without cancellation.
    pub one_minus_q2: f64,
    /// (1 − ζ)^{L_v}: probability that no bin lands in the DPC shell.
    pub no_bin: f64,
    #[serde(rename = "mu_U")]
    pub mu_u: f64,
    #[serde(rename = "mu_U_tilde")]
    pub mu_u_tilde: f64,
    #[serde(rename = "log_J_U")]
    pub log_j_u: LogValue,
    #[serde(rename = "log_J_U_tilde")]
    pub log_j_u_tilde: LogValue,
}

/// Full bound evaluation with every intermediate quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(rename = "eps_U_raw")]
    pub eps_u_raw: f64,
    #[serde(rename = "eps_U")]
    pub eps_u: f64,
    #[serde(rename = "eps_TIN_raw")]
    pub eps_tin_raw: f64,
    #[serde(rename = "eps_TIN")]
    pub eps_tin: f64,
    #[serde(rename = "eps_SIC_raw")]
    pub eps_sic_raw: f64,
    #[serde(rename = "eps_SIC")]
    pub eps_sic: f64,
    pub qblock: QBlock,
    pub per_k: Vec<PerKTerms>,
    #[serde(rename = "mu_U")]
    pub mu_u: f64,
    #[serde(rename = "mu_U_tilde")]
    pub mu_u_tilde: f64,
    #[serde(rename = "log_J_U")]
    pub log_j_u: LogValue,
    #[serde(rename = "log_J_U_tilde")]
    pub log_j_u_tilde: LogValue,
    pub derived: Derived,
    pub options: BoundOptions,
}

/// A bound value before and after clamping to [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clamped {
    pub raw: f64,
    pub value: f64,
}

impl Clamped {
    pub fn new(raw: f64) -> Self {
        Clamped { raw, value: clamp01(raw) }
    }
}

pub(crate) fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Neumaier-compensated sum in iteration order.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `k * ln(x)` with the convention `0 * ln(0) = 0`.
pub(crate) fn k_ln(k: u64, x: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

fn check_finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(name.to_string()))
    }
}

/// Pr[V − αX ∈ D_b] for independent uniform-sphere V and X.
pub fn zeta(cfg: &SystemConfig, split: &PowerSplit) -> Result<f64> {
    cfg.validate()?;
    split.validate(cfg)?;
    zeta_unchecked(cfg, split)
}

fn zeta_unchecked(cfg: &SystemConfig, split: &PowerSplit) -> Result<f64> {
    if split.alpha == 0.0 || split.beta_e == 0.0 {
        // The inflated interference vanishes; ‖V‖² = n_U β_U P sits on the
        // outer edge of the shell.
        return Ok(1.0);
    }
    let n = cfg.n_u as f64;
    let bv = split.beta_v();
    let x1 = split.alpha * (split.beta_e / bv).sqrt();
    let x2 = x1 + split.delta_b / (2.0 * split.alpha * n * cfg.power * (bv * split.beta_e).sqrt());
    if cfg.n_u < 3 {
        return Err(Error::InvalidConfig(format!(
            "the DPC shell probability needs n_u >= 3 when alpha > 0, got {}",
            cfg.n_u
        )));
    }
    Ok(sphere_coord_prob_tol(cfg.n_u, 1.0, x1, x2, QuadTolerance::default())?)
}

/// Chi-distribution tail Pr[‖Z‖ > t] for Z standard normal in ℝⁿ, t ≥ 0.
fn chi_tail(n: u64, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Ok(1.0);
    }
    Ok(reg_gamma_upper(n as f64 / 2.0, 0.5 * t * t)?)
}

/// Upper bound on the per-codeword miss probability:
/// Pr[‖Z‖² + u‖Z‖ ≥ μ] = 1 − F(√(μ+u²/4) − u/2), with F the chi CDF
/// (zero for nonpositive arguments). Equals 1 − G(n/2, λ(μ)) whenever
/// √(μ+u²/4) ≥ u/2.
pub fn miss_upper(n: u64, mu: f64, u: f64) -> Result<f64> {
    let lp = lambda_pair(mu, u);
    if lp.empty {
        return Ok(1.0);
    }
    let a = (mu + u * u / 4.0).sqrt();
    if a <= u / 2.0 {
        return Ok(1.0);
    }
    Ok(reg_gamma_upper(n as f64 / 2.0, lp.lambda)?)
}

/// Lower bound on the per-codeword miss probability:
/// Pr[‖Z‖² − u‖Z‖ ≥ μ̃] = 1 − F(√(μ̃+u²/4) + u/2) + F(u/2 − √(μ̃+u²/4)).
pub fn miss_lower(n: u64, mu_tilde: f64, u: f64) -> Result<f64> {
    let lp = lambda_pair(mu_tilde, u);
    if lp.empty {
        return Ok(1.0);
    }
    let a = (mu_tilde + u * u / 4.0).sqrt();
    let upper_tail = chi_tail(n, a + u / 2.0)?;
    let inner = if a < u / 2.0 { 1.0 - chi_tail(n, u / 2.0 - a)? } else { 0.0 };
    Ok(clamp01(upper_tail + inner))
}

/// Inputs for assembling a [`QBlock`].
pub(crate) struct UrllcParts {
    pub n_u: u64,
    pub u: f64,
    pub mu_u: f64,
    pub mu_u_tilde: f64,
    pub log_j_u: LogValue,
    pub log_j_u_tilde: LogValue,
    pub zeta: f64,
    pub rho: f64,
    pub l_v: u64,
    /// Number of codewords searched by the URLLC decoder.
    pub codewords: f64,
}

pub(crate) fn assemble_qblock(p: &UrllcParts, gamma_u: f64) -> Result<QBlock> {
    let l = p.codewords;
    let mu_u = check_finite_or_neg_inf(p.mu_u);
    let mu_u_tilde = check_finite_or_neg_inf(p.mu_u_tilde);
    let m_up = miss_upper(p.n_u, mu_u, p.u)?;
    let m_lo = miss_lower(p.n_u, mu_u_tilde, p.u)?;
    let one_minus_q2 = (l * m_up.ln()).exp();
    let q2 = -(l * m_up.ln()).exp_m1();
    let q4 = -(l * m_lo.ln()).exp_m1();
    let e_g = (-gamma_u).exp();
    let q1 = -(l * (-e_g).ln_1p()).exp_m1();
    let q = m_up + (l - 1.0) * e_g;
    let no_bin = (p.l_v as f64 * (-p.zeta).ln_1p()).exp();
    let rho_u = p.rho * (1.0 - no_bin);
    let q3 = rho_u * q4 + (1.0 - rho_u) * q1;
    debug_assert!(q3 >= 0.0 && rho_u * q2 <= 1.0);
    Ok(QBlock {
        zeta: p.zeta,
        rho_u: clamp01(rho_u),
        q: check_finite("q", q)?,
        q1: clamp01(q1),
        q2: clamp01(q2),
        q3: check_finite("q3", q3)?,
        q4: clamp01(q4),
        miss_upper: m_up,
        miss_lower: m_lo,
        one_minus_q2: clamp01(one_minus_q2),
        no_bin: clamp01(no_bin),
        mu_u: p.mu_u,
        mu_u_tilde: p.mu_u_tilde,
        log_j_u: p.log_j_u,
        log_j_u_tilde: p.log_j_u_tilde,
    })
}

fn check_finite_or_neg_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x
    }
}

/// ε_U = ρ((1−ζ)^{L_v} + q + 1 − q2) + (1−ρ) q1.
pub(crate) fn urllc_from_qblock(rho: f64, qb: &QBlock) -> Result<Clamped> {
    let raw = compensated_sum([rho * qb.no_bin, rho * qb.q, rho * qb.one_minus_q2, (1.0 - rho) * qb.q1]);
    Ok(Clamped::new(check_finite("eps_U", raw)?))
}

/// Mixture weights and Δ for each k, determined by the URLLC quantities.
#[derive(Clone, Debug)]
pub struct KWeights {
    pub tin: Vec<f64>,
    pub sic: Vec<f64>,
    pub delta_raw: Vec<f64>,
    pub delta: Vec<f64>,
    /// inner[k][k̃] = C(k,k̃) q^k̃ (1−q)^{k−k̃} with q clamped to [0, 1].
    pub inner: Vec<Vec<f64>>,
}

impl KWeights {
    pub fn new(eta: u64, qb: &QBlock) -> Self {
        let rho_u = qb.rho_u;
        let not_dt = 1.0 - rho_u * qb.q2;
        let den_k = rho_u * qb.q3 + (1.0 - rho_u) * qb.q1;
        let qc = clamp01(qb.q);
        let mut tin = Vec::with_capacity(eta as usize + 1);
        let mut sic = Vec::with_capacity(eta as usize + 1);
        let mut delta_raw = Vec::with_capacity(eta as usize + 1);
        let mut delta = Vec::with_capacity(eta as usize + 1);
        let mut inner = Vec::with_capacity(eta as usize + 1);
        for k in 0..=eta {
            let r = eta - k;
            let lb = ln_binomial(eta, k);
            tin.push((lb + k_ln(k, qb.q3) + k_ln(r, not_dt)).exp());
            sic.push((lb + k_ln(k, qb.q4) + k_ln(r, not_dt)).exp());
            let ln_num = k_ln(k, rho_u) + k_ln(r, 1.0 - rho_u) + k_ln(k, qb.q2) + k_ln(r, 1.0 - qb.q1);
            let ln_den = k_ln(k, den_k) + k_ln(r, not_dt);
            let d = if ln_num == f64::NEG_INFINITY {
                0.0
            } else if ln_den == f64::NEG_INFINITY {
                f64::MAX
            } else {
                (ln_num - ln_den).exp().min(f64::MAX)
            };
            delta_raw.push(d);
            delta.push(clamp01(d));
            inner.push(
                (0..=k)
                    .map(|kt| (ln_binomial(k, kt) + k_ln(kt, qc) + k_ln(k - kt, 1.0 - qc)).exp())
                    .collect(),
            );
        }
        KWeights { tin, sic, delta_raw, delta, inner }
    }
}

/// Per-k quantities that do not depend on any threshold.
#[derive(Clone, Debug)]
struct KStatic {
    log_j_e: LogValue,
    /// μ(k) + γ_e.
    mu_base: f64,
    /// Numerator of the Markov term: T(k) = expect/μ(k) + (L_e−1)e^{−γ_e}.
    expect: f64,
    log_j_e_tilde: Vec<LogValue>,
    /// μ̃(k, k̃) + γ̃_e.
    mu_tilde_base: Vec<f64>,
}

/// Cached evaluation state for one (config, split) pair.
#[derive(Clone, Debug)]
pub struct Evaluator {
    cfg: SystemConfig,
    split: PowerSplit,
    opts: BoundOptions,
    derived: Derived,
    zeta: f64,
    c_u: f64,
    /// μ_U + c_U γ_U.
    mu_u_base: f64,
    mu_u_tilde_base: f64,
    log_j_u: LogValue,
    log_j_u_tilde: LogValue,
    /// Coefficient of k̃/μ̃ in ν.
    nu_coef: f64,
    per_k: Vec<KStatic>,
}

impl Evaluator {
    pub fn new(cfg: &SystemConfig, split: &PowerSplit, opts: BoundOptions) -> Result<Self> {
        cfg.validate()?;
        split.validate(cfg)?;
        if split.alpha >= 1.0 {
            return Err(Error::DegenerateSplit(format!(
                "alpha = {} makes the (1 - alpha) factors in J_U and J_e vanish",
                split.alpha
            )));
        }
        let d = derive(cfg, split)?;
        let zeta = zeta_unchecked(cfg, split)?;

        let h2 = cfg.channel_gain * cfg.channel_gain;
        let p = cfg.power;
        let n = cfg.n_u as f64;
        let ne = cfg.n_e as f64;
        let eta = d.eta;
        let a1 = 1.0 - split.alpha;
        let (be, bu, bv) = (split.beta_e, split.beta_u, d.beta_v);
        let (s2, s22, s32) = (d.sigma2, d.sigma2_2, d.sigma3_2);
        let i3 = h2 * a1 * a1 * be * p; // σ₃² − 1
        let mix = bv + a1 * a1 * be;

        // URLLC surrogate factors.
        let ln_j_u = PI.ln() + 0.5 * (bv * be).ln() + (n + 1.0) / 2.0 * 2f64.ln() - i3 * n / 2.0
            - (9.0 * h2 * a1 * mix).ln();
        let ln_j_u_tilde = (27.0 * PI.sqrt() * (1.0 + i3)).ln() + n * h2 * p * mix
            - 2f64.ln()
            - (n - 2.0) * (h2 * a1).ln()
            - 0.5 * (8.0 * (1.0 + 2.0 * i3)).ln();
        let c_u = 2.0 * s2 * s32 / (h2 * (s2 - s32));
        let tail = -s2 * n * be * p * a1 * a1 / (s2 - s32);
        let base = n / 2.0 * (s2 / s32).ln();
        let mu_u_base = c_u * (base + ln_j_u)
            + s32 / (s2 - s32) * (n * p * (bu.sqrt() - be.sqrt()).powi(2) - split.delta_b)
            + tail;
        let mu_u_tilde_base = c_u * (base + ln_j_u_tilde) + s32 / (s2 - s32) * n * p * (bu.sqrt() + be.sqrt()).powi(2) + tail;

        // eMBB per-block surrogate factors.
        let ln_a = PI.ln() + (n + 1.0) / 2.0 * 2f64.ln() - h2 * bv * p * n / 2.0 + 0.5 * (bv * be).ln()
            - (9.0 * h2).ln()
            - (n - 1.0) * a1.ln()
            - mix.ln();
        let ln_b = 0.5 * (8.0 * (1.0 + 2.0 * h2 * p)).ln() - (27.0 * PI.sqrt() * (1.0 + h2 * p)).ln();
        let ln_c = 0.5 * (8.0 * (1.0 + 2.0 * i3)).ln() - (27.0 * PI.sqrt() * (1.0 + i3)).ln();
        let (la, lb, lc) = (LogValue::from_ln(ln_a), LogValue::from_ln(ln_b), LogValue::from_ln(ln_c));

        let cg = 2f64.sqrt() * gamma_ratio_half(cfg.n_u)?;
        let snp = (n * p).sqrt();
        let comb = (bv.sqrt() + a1 * be.sqrt()).powi(2);
        let nu_coef = cg * (d.tau - a1 * (n * be * p).sqrt() / s32) + n * ((s2 - s22) / (2.0 * s2 * s22) - (s32 - 1.0) / (2.0 * s32));

        let mut per_k = Vec::with_capacity(eta as usize + 1);
        for k in 0..=eta {
            let kf = k as f64;
            let r = eta - k;
            let unpunct = if opts.appendix_mu { (r + 1) as f64 } else { r as f64 };
            let log_j_e = la.powi(k).mul(lb.powi(r));
            let mu_base = ne / 2.0 * s2.ln() - kf * n / 2.0 * s22.ln() - unpunct / (2.0 * s2) * n * p
                + kf / (2.0 * s22) * bv * n * p
                - kf / (2.0 * s2) * comb * n * p
                + log_j_e.ln();
            let expect = (ne - kf * n) * (s2 - 1.0) / (2.0 * s2)
                + (eta + 1 - k) as f64 * snp / s2 * cg
                + kf * d.tau * cg
                + kf * n * (s2 - s22) / (2.0 * s2 * s22);
            let mut log_j_e_tilde = Vec::with_capacity(k as usize + 1);
            let mut mu_tilde_base = Vec::with_capacity(k as usize + 1);
            for kt in 0..=k {
                let ktf = kt as f64;
                let lj = la.powi(k - kt).mul(lb.powi(r)).mul(lc.powi(kt));
                let mt = ne / 2.0 * s2.ln()
                    + n * p
                        * ((kf - ktf) / 2.0 * (bv / s22 - comb / s2 - s22.ln() / p)
                            + ktf / (2.0 * p) * (s32 / s2).ln()
                            - r as f64 / (2.0 * s2)
                            - ktf * a1 * a1 * be / (2.0 * s32))
                    + lj.ln();
                log_j_e_tilde.push(lj);
                mu_tilde_base.push(mt);
            }
            per_k.push(KStatic { log_j_e, mu_base, expect, log_j_e_tilde, mu_tilde_base });
        }

        Ok(Evaluator {
            cfg: cfg.clone(),
            split: *split,
            opts,
            derived: d,
            zeta,
            c_u,
            mu_u_base,
            mu_u_tilde_base,
            log_j_u: LogValue::from_ln(ln_j_u),
            log_j_u_tilde: LogValue::from_ln(ln_j_u_tilde),
            nu_coef,
            per_k,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn split(&self) -> &PowerSplit {
        &self.split
    }

    pub fn derived(&self) -> &Derived {
        &self.derived
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// Threshold μ_U of the URLLC miss bound at γ_U.
    pub fn mu_u(&self, gamma_u: f64) -> f64 {
        self.mu_u_base - self.c_u * gamma_u
    }

    pub fn mu_u_tilde(&self, gamma_u: f64) -> f64 {
        self.mu_u_tilde_base - self.c_u * gamma_u
    }

    pub fn q_block(&self, gamma_u: f64) -> Result<QBlock> {
        let parts = UrllcParts {
            n_u: self.cfg.n_u,
            u: self.derived.u,
            mu_u: self.mu_u(gamma_u),
            mu_u_tilde: self.mu_u_tilde(gamma_u),
            log_j_u: self.log_j_u,
            log_j_u_tilde: self.log_j_u_tilde,
            zeta: self.zeta,
            rho: self.cfg.rho,
            l_v: self.cfg.l_v,
            codewords: self.cfg.l_v as f64 * self.cfg.l_u as f64,
        };
        assemble_qblock(&parts, gamma_u)
    }

    pub fn urllc(&self, qb: &QBlock) -> Result<Clamped> {
        urllc_from_qblock(self.cfg.rho, qb)
    }

    fn union_term(&self, gamma: f64) -> f64 {
        if self.cfg.l_e <= 1 {
            0.0
        } else {
            (self.cfg.l_e - 1) as f64 * (-gamma).exp()
        }
    }

    /// TIN bound value at the given weights and γ_e.
    pub fn tin_value(&self, w: &KWeights, gamma_e: f64) -> Result<Clamped> {
        let union = self.union_term(gamma_e);
        let raw = compensated_sum(self.per_k.iter().enumerate().map(|(k, ks)| {
            let (_, bracket, _) = terms::tin_bracket(ks.mu_base - gamma_e, ks.expect, union, w.delta[k]);
            w.tin[k] * bracket
        }));
        Ok(Clamped::new(check_finite("eps_TIN", raw)?))
    }

    /// SIC bound value at the given weights, γ_e and γ̃_e.
    pub fn sic_value(&self, w: &KWeights, gamma_e: f64, gamma_e_tilde: f64) -> Result<Clamped> {
        let union = self.union_term(gamma_e);
        let union_t = self.union_term(gamma_e_tilde);
        let mut outer = Vec::with_capacity(self.per_k.len());
        for (k, ks) in self.per_k.iter().enumerate() {
            if w.sic[k] == 0.0 {
                outer.push(0.0);
                continue;
            }
            let mu = ks.mu_base - gamma_e;
            let mu_t_num = ks.expect + if union == 0.0 { 0.0 } else { mu * union };
            let inner = compensated_sum(ks.mu_tilde_base.iter().enumerate().map(|(kt, mtb)| {
                let s = terms::sic_inner(mu, mu_t_num, mtb - gamma_e_tilde, kt as f64, self.nu_coef, union_t);
                w.inner[k][kt] * s.1
            }));
            let bracket = clamp01(1.0 - w.delta[k] + inner);
            outer.push(w.sic[k] * bracket);
        }
        let raw = compensated_sum(outer);
        Ok(Clamped::new(check_finite("eps_SIC", raw)?))
    }

    /// Full report with every per-k and per-k̃ intermediate.
    pub fn report(&self, thr: &Thresholds) -> Result<BoundReport> {
        thr.validate()?;
        let qb = self.q_block(thr.gamma_u)?;
        let eps_u = self.urllc(&qb)?;
        let w = KWeights::new(self.derived.eta, &qb);
        let union = self.union_term(thr.gamma_e);
        let union_t = self.union_term(thr.gamma_e_tilde);
        let mut per_k = Vec::with_capacity(self.per_k.len());
        for (k, ks) in self.per_k.iter().enumerate() {
            per_k.push(terms::build_per_k(
                k as u64,
                ks.log_j_e,
                ks.mu_base - thr.gamma_e,
                ks.expect,
                union,
                &ks.log_j_e_tilde,
                &ks.mu_tilde_base,
                thr.gamma_e_tilde,
                self.nu_coef,
                union_t,
                &w,
            )?);
        }
        let eps_tin_raw = check_finite("eps_TIN", compensated_sum(per_k.iter().map(|t| t.tin_weight * t.tin_bracket)))?;
        let eps_sic_raw = check_finite("eps_SIC", compensated_sum(per_k.iter().map(|t| t.sic_weight * t.sic_bracket)))?;
        Ok(BoundReport {
            eps_u_raw: eps_u.raw,
            eps_u: eps_u.value,
            eps_tin_raw,
            eps_tin: clamp01(eps_tin_raw),
            eps_sic_raw,
            eps_sic: clamp01(eps_sic_raw),
            qblock: qb,
            per_k,
            mu_u: qb.mu_u,
            mu_u_tilde: qb.mu_u_tilde,
            log_j_u: self.log_j_u,
            log_j_u_tilde: self.log_j_u_tilde,
            derived: self.derived,
            options: self.opts,
        })
    }
}

/// URLLC-side quantities q, q1–q4, ρ_U and ζ.
pub fn q_quantities(cfg: &SystemConfig, split: &PowerSplit, thr: &Thresholds) -> Result<QBlock> {
    thr.validate()?;
    Evaluator::new(cfg, split, BoundOptions::default())?.q_block(thr.gamma_u)
}

/// URLLC error bound.
pub fn urllc_bound(cfg: &SystemConfig, split: &PowerSplit, thr: &Thresholds) -> Result<(Clamped, QBlock)> {
    let qb = q_quantities(cfg, split, thr)?;
    Ok((urllc_from_qblock(cfg.rho, &qb)?, qb))
}

/// eMBB error bound under TIN decoding, with per-k terms.
pub fn tin_bound(cfg: &SystemConfig, split: &PowerSplit, thr: &Thresholds, opts: BoundOptions) -> Result<(Clamped, Vec<PerKTerms>)> {
    let r = evaluate(cfg, split, thr, opts)?;
    Ok((Clamped { raw: r.eps_tin_raw, value: r.eps_tin }, r.per_k))
}

/// eMBB error bound under SIC decoding, with per-k and per-k̃ terms.
pub fn sic_bound(cfg: &SystemConfig, split: &PowerSplit, thr: &Thresholds, opts: BoundOptions) -> Result<(Clamped, Vec<PerKTerms>)> {
    let r = evaluate(cfg, split, thr, opts)?;
    Ok((Clamped { raw: r.eps_sic_raw, value: r.eps_sic }, r.per_k))
}

/// All three bounds with intermediates.
pub fn evaluate(cfg: &SystemConfig, split: &PowerSplit, thr: &Thresholds, opts: BoundOptions) -> Result<BoundReport> {
    Evaluator::new(cfg, split, opts)?.report(thr)
}
