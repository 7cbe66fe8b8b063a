//! Monte Carlo simulation of the coding scheme at desk scale: random sphere
//! codebooks, DPC encoding, the AWGN channel, threshold URLLC detection and
//! the TIN and SIC eMBB decoders.
//!
//! Trial `t` draws all of its randomness from a ChaCha8 generator seeded
//! with the master seed and switched to stream `t`, so results do not
//! depend on how trials are scheduled across threads.

mod codebook;
mod decode;
mod encode;
mod sphere;
mod stats;

pub use codebook::{Codebooks, Matrix};
pub use decode::{
    embb_decode_sic, embb_decode_tin, embb_plain_metric, embb_sic_metric, embb_tin_metric, urllc_decode, urllc_metric,
    UrllcEstimate,
};
pub use encode::{dpc_encode, transmit, Transmission};
pub use sphere::{fill_sphere, sample_sphere};
pub use stats::Estimate;

use crate::model::{derive, PowerSplit, SystemConfig, Thresholds};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default per-trial codebook memory budget (256 MiB).
pub const DEFAULT_MEMORY_BUDGET: u64 = 256 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub memory_budget_bytes: u64,
    /// Test hook: replace the channel noise by zeros.
    pub noiseless: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { memory_budget_bytes: DEFAULT_MEMORY_BUDGET, noiseless: false }
    }
}

/// Per-trial record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub arrivals: Vec<bool>,
    pub sent: Vec<bool>,
    pub detected: Vec<bool>,
    /// Sent, detected and decoded to the transmitted (message, bin) pair.
    pub decoded: Vec<bool>,
    pub urllc_correct: Vec<bool>,
    pub embb_correct_tin: bool,
    pub embb_correct_sic: bool,
    pub power_ok: bool,
    /// Largest per-block energy above len·P.
    pub max_block_excess: f64,
}

/// Aggregated empirical error rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub trials: u64,
    pub rng_seed: u64,
    /// URLLC error rate pooled over all mini-slots.
    #[serde(rename = "eps_U_hat")]
    pub eps_u: Estimate,
    #[serde(rename = "eps_U_hat_per_block")]
    pub eps_u_per_block: Vec<Estimate>,
    #[serde(rename = "eps_TIN_hat")]
    pub eps_tin: Estimate,
    #[serde(rename = "eps_SIC_hat")]
    pub eps_sic: Estimate,
    /// Fraction of arrived URLLC messages for which some bin fit the shell.
    pub dpc_acceptance_rate: Estimate,
    /// Detections in mini-slots without a sent URLLC codeword.
    pub false_alarm_rate: Estimate,
    /// Trials whose total energy exceeded n_e P.
    pub power_violations: u64,
    pub max_block_excess: f64,
}

/// Generator for trial `t` under `master_seed`.
pub fn trial_rng(master_seed: u64, t: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(t);
    rng
}

fn check_budget(cfg: &SystemConfig, opts: &SimOptions) -> Result<()> {
    let footprint = Codebooks::footprint_bytes(cfg);
    if footprint > u128::from(opts.memory_budget_bytes) {
        return Err(Error::ConfigTooLarge { footprint, budget: u128::from(opts.memory_budget_bytes) });
    }
    Ok(())
}

/// Runs trial `t` and returns its outcome.
pub fn run_trial(
    cfg: &SystemConfig,
    split: &PowerSplit,
    thr: &Thresholds,
    master_seed: u64,
    t: u64,
    opts: &SimOptions,
) -> Result<TrialOutcome> {
    cfg.validate()?;
    split.validate(cfg)?;
    check_budget(cfg, opts)?;
    let d = derive(cfg, split)?;
    let mut rng = trial_rng(master_seed, t);
    Ok(simulate_one(cfg, split, thr, &d, opts, &mut rng))
}

fn simulate_one<R: Rng>(
    cfg: &SystemConfig,
    split: &PowerSplit,
    thr: &Thresholds,
    d: &crate::model::Derived,
    opts: &SimOptions,
    rng: &mut R,
) -> TrialOutcome {
    let eta = cfg.eta() as usize;
    let h = cfg.channel_gain;
    let books = Codebooks::generate(cfg, split, rng);
    let ell = rng.random_range(0..cfg.l_e as usize);
    let mut arrivals = vec![false; eta];
    let mut messages = vec![0usize; eta];
    for b in 0..eta {
        arrivals[b] = rng.random_bool(cfg.rho);
        messages[b] = rng.random_range(0..cfg.l_u as usize);
    }
    let mut urllc_inputs: Vec<Option<Vec<f64>>> = vec![None; eta];
    let mut bins = vec![None; eta];
    for b in 0..eta {
        if arrivals[b] {
            if let Some((j, xu)) =
                dpc_encode(&books.v[b], messages[b], books.l_v, books.xe2[b].row(ell), split, cfg, rng)
            {
                bins[b] = Some(j);
                urllc_inputs[b] = Some(xu);
            }
        }
    }
    let tx = transmit(cfg, &books, ell, &urllc_inputs, opts.noiseless, rng);
    let estimates: Vec<UrllcEstimate> =
        (0..eta).map(|b| urllc_decode(&tx.y[b], &books, b, thr.gamma_u, h, d)).collect();
    let sent: Vec<bool> = bins.iter().map(Option::is_some).collect();
    let detected: Vec<bool> = estimates.iter().map(|e| e.detected).collect();
    let decoded: Vec<bool> = (0..eta)
        .map(|b| sent[b] && estimates[b].estimate == bins[b].map(|j| (messages[b], j)))
        .collect();
    let urllc_correct: Vec<bool> = (0..eta)
        .map(|b| {
            if arrivals[b] {
                sent[b] && estimates[b].estimate.map(|(m, _)| m) == Some(messages[b])
            } else {
                !estimates[b].detected
            }
        })
        .collect();
    let tin = embb_decode_tin(&tx.y, &books, &detected, h, split.alpha, d);
    let sic = embb_decode_sic(&tx.y, &books, &estimates, h, split.alpha, d);
    TrialOutcome {
        arrivals,
        sent,
        detected,
        decoded,
        urllc_correct,
        embb_correct_tin: tin == ell,
        embb_correct_sic: sic == ell,
        power_ok: tx.power_ok,
        max_block_excess: tx.max_block_excess,
    }
}

#[derive(Clone, Debug, Default)]
struct Counts {
    urllc_err: Vec<u64>,
    tin_err: u64,
    sic_err: u64,
    arrivals: u64,
    sent: u64,
    idle: u64,
    false_alarms: u64,
    power_violations: u64,
    max_excess: f64,
}

impl Counts {
    fn new(eta: usize) -> Self {
        Counts { urllc_err: vec![0; eta], max_excess: f64::NEG_INFINITY, ..Default::default() }
    }

    fn add(mut self, o: &TrialOutcome) -> Self {
        for (b, ok) in o.urllc_correct.iter().enumerate() {
            self.urllc_err[b] += u64::from(!ok);
        }
        self.tin_err += u64::from(!o.embb_correct_tin);
        self.sic_err += u64::from(!o.embb_correct_sic);
        for b in 0..o.arrivals.len() {
            self.arrivals += u64::from(o.arrivals[b]);
            self.sent += u64::from(o.sent[b]);
            if !o.sent[b] {
                self.idle += 1;
                self.false_alarms += u64::from(o.detected[b]);
            }
        }
        self.power_violations += u64::from(!o.power_ok);
        self.max_excess = self.max_excess.max(o.max_block_excess);
        self
    }

    fn merge(mut self, o: Counts) -> Self {
        for (a, b) in self.urllc_err.iter_mut().zip(&o.urllc_err) {
            *a += b;
        }
        self.tin_err += o.tin_err;
        self.sic_err += o.sic_err;
        self.arrivals += o.arrivals;
        self.sent += o.sent;
        self.idle += o.idle;
        self.false_alarms += o.false_alarms;
        self.power_violations += o.power_violations;
        self.max_excess = self.max_excess.max(o.max_excess);
        self
    }
}

/// Runs `n_trials` independent trials in parallel and aggregates them.
pub fn run_trials(
    cfg: &SystemConfig,
    split: &PowerSplit,
    thr: &Thresholds,
    n_trials: u64,
    master_seed: u64,
    opts: &SimOptions,
) -> Result<SimReport> {
    if n_trials == 0 {
        return Err(Error::InvalidConfig("n_trials must be >= 1".into()));
    }
    cfg.validate()?;
    split.validate(cfg)?;
    check_budget(cfg, opts)?;
    let d = derive(cfg, split)?;
    let eta = cfg.eta() as usize;
    let counts = (0..n_trials)
        .into_par_iter()
        .fold(
            || Counts::new(eta),
            |acc, t| {
                let mut rng = trial_rng(master_seed, t);
                acc.add(&simulate_one(cfg, split, thr, &d, opts, &mut rng))
            },
        )
        .reduce(|| Counts::new(eta), Counts::merge);
    let per_block: Vec<Estimate> = counts.urllc_err.iter().map(|&e| Estimate::wilson(e, n_trials)).collect();
    let pooled = counts.urllc_err.iter().sum();
    Ok(SimReport {
        trials: n_trials,
        rng_seed: master_seed,
        eps_u: Estimate::wilson(pooled, n_trials * eta as u64),
        eps_u_per_block: per_block,
        eps_tin: Estimate::wilson(counts.tin_err, n_trials),
        eps_sic: Estimate::wilson(counts.sic_err, n_trials),
        dpc_acceptance_rate: Estimate::wilson(counts.sent, counts.arrivals),
        false_alarm_rate: Estimate::wilson(counts.false_alarms, counts.idle),
        power_violations: counts.power_violations,
        max_block_excess: counts.max_excess,
    })
}
