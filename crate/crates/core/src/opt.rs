//! Constrained grid search over (α, β_e, δ_b, γ_U, γ_e, γ̃_e) minimizing an
//! eMBB bound subject to ε_U ≤ target, followed by shrinking-grid
//! refinement around the incumbent.
//!
//! Points are enumerated with α outermost and γ̃_e innermost. Candidates are
//! compared by (clamped bound, raw bound); the first point in enumeration
//! order wins ties, independent of how the work is split across threads.

use crate::baseline::TsEvaluator;
use crate::bounds::{BoundOptions, Evaluator, KWeights};
use crate::model::{PowerSplit, SystemConfig, Thresholds};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Tin,
    Sic,
    Ts,
}

/// One search dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Grid {
    Values(Vec<f64>),
    Linear { min: f64, max: f64, points: usize },
    Log { min: f64, max: f64, points: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            Grid::Values(ref v) => v.clone(),
            Grid::Linear { min, max, points } => spaced(min, max, points, false),
            Grid::Log { min, max, points } => spaced(min, max, points, true),
        }
    }

    fn is_log(&self) -> bool {
        matches!(self, Grid::Log { .. })
    }

    /// Parses `lin:min:max:points` or `log:min:max:points`.
    pub fn parse(s: &str) -> Option<Grid> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return None;
        }
        let min = parts[1].trim().parse().ok()?;
        let max = parts[2].trim().parse().ok()?;
        let points = parts[3].trim().parse().ok()?;
        match parts[0].trim() {
            "lin" => Some(Grid::Linear { min, max, points }),
            "log" => Some(Grid::Log { min, max, points }),
            _ => None,
        }
    }
}

fn spaced(min: f64, max: f64, points: usize, log: bool) -> Vec<f64> {
    if points == 0 {
        return Vec::new();
    }
    if points == 1 {
        return vec![min];
    }
    let (a, b) = if log { (min.ln(), max.ln()) } else { (min, max) };
    (0..points)
        .map(|i| {
            let t = a + (b - a) * i as f64 / (points - 1) as f64;
            let v = if log { t.exp() } else { t };
            // Pin the endpoints exactly.
            if i == 0 {
                min
            } else if i + 1 == points {
                max
            } else {
                v
            }
        })
        .collect()
}

/// Closed domain of each searched parameter.
const ALPHA_DOMAIN: (f64, f64) = (0.0, 0.999);
const BETA_DOMAIN: (f64, f64) = (1e-3, 0.999);
const DELTA_DOMAIN: (f64, f64) = (1e-4, 0.999);
const GAMMA_DOMAIN: (f64, f64) = (1e-3, 1e4);

/// Search configuration. Threshold grids left as `None` are derived from the
/// message counts and the target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub objective: Objective,
    pub urllc_target: f64,
    pub alpha: Grid,
    pub beta_e: Grid,
    /// δ_b as fractions of n_U β_U P.
    pub delta_frac: Grid,
    pub gamma_u: Option<Grid>,
    pub gamma_e: Option<Grid>,
    pub gamma_e_tilde: Option<Grid>,
    pub refine_rounds: u32,
    pub options: BoundOptions,
}

impl SearchSpec {
    pub fn new(objective: Objective, urllc_target: f64) -> Self {
        SearchSpec {
            objective,
            urllc_target,
            alpha: Grid::Linear { min: 0.0, max: 0.99, points: 21 },
            beta_e: Grid::Linear { min: 0.01, max: 0.99, points: 21 },
            delta_frac: Grid::Values(vec![0.01, 0.05, 0.1, 0.2]),
            gamma_u: None,
            gamma_e: None,
            gamma_e_tilde: None,
            refine_rounds: 2,
            options: BoundOptions::default(),
        }
    }

    /// Default threshold grid: 31 log-spaced points around ln(count/target).
    pub fn default_gamma_grid(count: u64, target: f64) -> Grid {
        let c = (count.max(2) as f64 / target).ln().max(1.0);
        Grid::Log { min: c / 8.0, max: 8.0 * c, points: 31 }
    }

    fn resolved(&self, cfg: &SystemConfig) -> [Grid; 6] {
        let gu = self
            .gamma_u
            .clone()
            .unwrap_or_else(|| Self::default_gamma_grid(cfg.l_u.saturating_mul(cfg.l_v), self.urllc_target));
        let ge = self.gamma_e.clone().unwrap_or_else(|| Self::default_gamma_grid(cfg.l_e, self.urllc_target));
        let get = self.gamma_e_tilde.clone().unwrap_or_else(|| ge.clone());
        [self.alpha.clone(), self.beta_e.clone(), self.delta_frac.clone(), gu, ge, get]
    }

    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSearch(m));
        if !(self.urllc_target > 0.0 && self.urllc_target <= 1.0) {
            return bad(format!("urllc_target must lie in (0, 1], got {}", self.urllc_target));
        }
        let names = ["alpha", "beta_e", "delta_frac", "gamma_u", "gamma_e", "gamma_e_tilde"];
        let domains = [ALPHA_DOMAIN, BETA_DOMAIN, DELTA_DOMAIN, GAMMA_DOMAIN, GAMMA_DOMAIN, GAMMA_DOMAIN];
        for ((g, name), (lo, hi)) in self.resolved(cfg).iter().zip(names).zip(domains) {
            if let Grid::Log { min, .. } = g {
                if !(*min > 0.0) {
                    return bad(format!("{name} log grid needs a positive minimum"));
                }
            }
            let pts = g.points();
            if pts.is_empty() {
                return bad(format!("{name} grid is empty"));
            }
            if let Some(v) = pts.iter().find(|v| !(**v >= lo && **v <= hi)) {
                return bad(format!("{name} grid value {v} outside [{lo}, {hi}]"));
            }
        }
        Ok(())
    }
}

/// Result of one optimization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub objective: Objective,
    pub feasible: bool,
    /// Clamped objective bound at the reported point.
    pub eps_e: f64,
    pub eps_e_raw: f64,
    #[serde(rename = "eps_U")]
    pub eps_u: f64,
    /// `None` for the time-sharing objective, which has no power split.
    pub best_split: Option<PowerSplit>,
    pub best_thr: Thresholds,
    /// TIN and SIC bounds at the reported point (absent for time sharing).
    #[serde(rename = "eps_TIN")]
    pub eps_tin: Option<f64>,
    #[serde(rename = "eps_SIC")]
    pub eps_sic: Option<f64>,
    pub evaluations: u64,
    /// Incumbent objective after the coarse pass and after each refinement;
    /// `None` while no feasible point has been found.
    pub incumbent_history: Vec<Option<f64>>,
    pub frontier: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    key: (f64, f64),
    idx: [usize; 6],
}

fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

#[derive(Clone, Copy, Debug)]
struct Diagnostic {
    eps_u: f64,
    idx: [usize; 6],
}

#[derive(Debug, Default)]
struct PassResult {
    best: Option<Candidate>,
    diag: Option<Diagnostic>,
    evaluations: u64,
}

fn merge(mut a: PassResult, b: PassResult) -> PassResult {
    if let Some(cb) = b.best {
        if a.best.map_or(true, |ca| better(cb.key, ca.key)) {
            a.best = Some(cb);
        }
    }
    if let Some(db) = b.diag {
        if a.diag.map_or(true, |da| db.eps_u < da.eps_u) {
            a.diag = Some(db);
        }
    }
    a.evaluations += b.evaluations;
    a
}

fn split_at(cfg: &SystemConfig, g: &[Vec<f64>; 6], idx: &[usize; 6]) -> PowerSplit {
    PowerSplit::with_delta_fraction(cfg, g[0][idx[0]], g[1][idx[1]], g[2][idx[2]])
}

fn thr_at(g: &[Vec<f64>; 6], idx: &[usize; 6]) -> Thresholds {
    Thresholds { gamma_u: g[3][idx[3]], gamma_e: g[4][idx[4]], gamma_e_tilde: g[5][idx[5]] }
}

/// One exhaustive pass of the proposed scheme over a grid.
fn pass_scheme(cfg: &SystemConfig, spec: &SearchSpec, g: &[Vec<f64>; 6]) -> PassResult {
    let (na, nb, nd) = (g[0].len(), g[1].len(), g[2].len());
    let results: Vec<PassResult> = (0..na * nb * nd)
        .into_par_iter()
        .map(|flat| {
            let (ia, ib, id) = (flat / (nb * nd), (flat / nd) % nb, flat % nd);
            let mut out = PassResult::default();
            let split = split_at(cfg, g, &[ia, ib, id, 0, 0, 0]);
            let Ok(ev) = Evaluator::new(cfg, &split, spec.options) else {
                return out;
            };
            for (iu, &gu) in g[3].iter().enumerate() {
                let Ok(qb) = ev.q_block(gu) else { continue };
                let Ok(eu) = ev.urllc(&qb) else { continue };
                out.evaluations += 1;
                let idx0 = [ia, ib, id, iu, 0, 0];
                if out.diag.map_or(true, |d| eu.value < d.eps_u) {
                    out.diag = Some(Diagnostic { eps_u: eu.value, idx: idx0 });
                }
                if eu.value > spec.urllc_target {
                    continue;
                }
                let w = KWeights::new(ev.derived().eta, &qb);
                for (ie, &ge) in g[4].iter().enumerate() {
                    match spec.objective {
                        Objective::Tin => {
                            out.evaluations += 1;
                            if let Ok(v) = ev.tin_value(&w, ge) {
                                let c = Candidate { key: (v.value, v.raw), idx: [ia, ib, id, iu, ie, 0] };
                                if out.best.map_or(true, |b| better(c.key, b.key)) {
                                    out.best = Some(c);
                                }
                            }
                        }
                        Objective::Sic => {
                            for (it, &gt) in g[5].iter().enumerate() {
                                out.evaluations += 1;
                                if let Ok(v) = ev.sic_value(&w, ge, gt) {
                                    let c = Candidate { key: (v.value, v.raw), idx: [ia, ib, id, iu, ie, it] };
                                    if out.best.map_or(true, |b| better(c.key, b.key)) {
                                        out.best = Some(c);
                                    }
                                }
                            }
                        }
                        Objective::Ts => unreachable!("time sharing has its own pass"),
                    }
                }
            }
            out
        })
        .collect();
    results.into_iter().fold(PassResult::default(), merge)
}

/// One pass of the time-sharing baseline over its threshold grids.
fn pass_ts(ev: &TsEvaluator, spec: &SearchSpec, g: &[Vec<f64>; 6]) -> PassResult {
    let mut out = PassResult::default();
    let embb: Vec<Option<(f64, f64)>> = g[4].iter().map(|&ge| ev.embb(ge).ok()).collect();
    for (iu, &gu) in g[3].iter().enumerate() {
        let Ok((_, eu, _)) = ev.urllc(gu) else { continue };
        out.evaluations += 1;
        let idx0 = [0, 0, 0, iu, 0, 0];
        if out.diag.map_or(true, |d| eu < d.eps_u) {
            out.diag = Some(Diagnostic { eps_u: eu, idx: idx0 });
        }
        if eu > spec.urllc_target {
            continue;
        }
        for (ie, v) in embb.iter().enumerate() {
            out.evaluations += 1;
            if let Some((raw, val)) = *v {
                let c = Candidate { key: (val, raw), idx: [0, 0, 0, iu, ie, 0] };
                if out.best.map_or(true, |b| better(c.key, b.key)) {
                    out.best = Some(c);
                }
            }
        }
    }
    out
}

/// Grid of the same size centred on `x`, spanning half the previous range,
/// shifted into the domain and containing `x` exactly.
fn refine_dim(pts: &[f64], x: f64, log: bool, domain: (f64, f64)) -> Vec<f64> {
    let n = pts.len();
    if n <= 1 {
        return pts.to_vec();
    }
    let lo = pts.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = pts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let map = |v: f64| if log { v.ln() } else { v };
    let unmap = |v: f64| if log { v.exp() } else { v };
    let (dlo, dhi) = (map(domain.0.max(if log { f64::MIN_POSITIVE } else { f64::NEG_INFINITY })), map(domain.1));
    let half = (map(hi) - map(lo)) / 4.0;
    if !(half > 0.0) {
        return pts.to_vec();
    }
    let c = map(x);
    let (mut a, mut b) = (c - half, c + half);
    if a < dlo {
        b += dlo - a;
        a = dlo;
    }
    if b > dhi {
        a -= b - dhi;
        b = dhi;
    }
    a = a.max(dlo);
    let mut out = spaced(unmap(a), unmap(b), n, log);
    let nearest = out
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, v)| if (v - x).abs() < best.1 { (i, (v - x).abs()) } else { best })
        .0;
    out[nearest] = x;
    out
}

/// Minimizes the configured eMBB bound subject to ε_U ≤ target.
pub fn optimize(cfg: &SystemConfig, spec: &SearchSpec) -> Result<OptResult> {
    cfg.validate()?;
    spec.validate(cfg)?;
    let grids = spec.resolved(cfg);
    let logs: Vec<bool> = grids.iter().map(Grid::is_log).collect();
    let domains = [ALPHA_DOMAIN, BETA_DOMAIN, DELTA_DOMAIN, GAMMA_DOMAIN, GAMMA_DOMAIN, GAMMA_DOMAIN];
    let mut g: [Vec<f64>; 6] = grids.map(|gr| gr.points());
    let ts = match spec.objective {
        Objective::Ts => Some(TsEvaluator::new(cfg, spec.options)?),
        _ => None,
    };
    let run = |g: &[Vec<f64>; 6]| match &ts {
        Some(ev) => pass_ts(ev, spec, g),
        None => pass_scheme(cfg, spec, g),
    };

    let res = run(&g);
    let mut evaluations = res.evaluations;
    let mut best = res.best.map(|c| (c.key, split_at(cfg, &g, &c.idx), thr_at(&g, &c.idx)));
    let mut diag = res.diag.map(|d| (d.eps_u, split_at(cfg, &g, &d.idx), thr_at(&g, &d.idx)));
    let mut history = vec![best.map(|b| b.0 .0)];

    for _ in 0..spec.refine_rounds {
        // Without a feasible incumbent, refine the URLLC-side parameters
        // around the smallest-ε_U point instead.
        let (split, thr, active) = match (best, diag) {
            (Some((_, s, t)), _) => {
                let active = match spec.objective {
                    Objective::Ts => [false, false, false, true, true, false],
                    Objective::Tin => [true, true, true, true, true, false],
                    Objective::Sic => [true; 6],
                };
                (s, t, active)
            }
            (None, Some((_, s, t))) => {
                let ts = spec.objective == Objective::Ts;
                (s, t, [!ts, !ts, !ts, true, false, false])
            }
            (None, None) => break,
        };
        let x = [split.alpha, split.beta_e, split.delta_b / (cfg.n_u as f64 * split.beta_u * cfg.power), thr.gamma_u, thr.gamma_e, thr.gamma_e_tilde];
        for i in 0..6 {
            if active[i] {
                g[i] = refine_dim(&g[i], x[i], logs[i], domains[i]);
            }
        }
        let res = run(&g);
        evaluations += res.evaluations;
        if let Some(c) = res.best {
            if best.is_none_or(|b| better(c.key, b.0)) {
                best = Some((c.key, split_at(cfg, &g, &c.idx), thr_at(&g, &c.idx)));
            }
        }
        if let Some(d) = res.diag {
            if diag.is_none_or(|b| d.eps_u < b.0) {
                diag = Some((d.eps_u, split_at(cfg, &g, &d.idx), thr_at(&g, &d.idx)));
            }
        }
        history.push(best.map(|b| b.0 .0));
    }

    let (split, thr, found) = match (best, diag) {
        (Some((_, s, t)), _) => (s, t, true),
        (None, Some((_, s, t))) => (s, t, false),
        (None, None) => return Err(Error::InvalidSearch("no grid point could be evaluated".into())),
    };
    finalize(cfg, spec, split, thr, found, evaluations, history)
}

/// Re-evaluates the chosen point with the full (non-lazy) bounds.
fn finalize(
    cfg: &SystemConfig,
    spec: &SearchSpec,
    split: PowerSplit,
    mut thr: Thresholds,
    found: bool,
    evaluations: u64,
    incumbent_history: Vec<Option<f64>>,
) -> Result<OptResult> {
    if spec.objective == Objective::Tin {
        thr.gamma_e_tilde = thr.gamma_e;
    }
    let (eps_e, eps_e_raw, eps_u, best_split, eps_tin, eps_sic) = match spec.objective {
        Objective::Ts => {
            let r = TsEvaluator::new(cfg, spec.options)?.report(&thr)?;
            (r.eps_e_ts, r.eps_e_ts_raw, r.eps_u_ts, None, None, None)
        }
        obj => {
            let r = Evaluator::new(cfg, &split, spec.options)?.report(&thr)?;
            let (v, raw) = if obj == Objective::Tin { (r.eps_tin, r.eps_tin_raw) } else { (r.eps_sic, r.eps_sic_raw) };
            (v, raw, r.eps_u, Some(split), Some(r.eps_tin), Some(r.eps_sic))
        }
    };
    let feasible = found && eps_u <= spec.urllc_target;
    Ok(OptResult {
        objective: spec.objective,
        feasible,
        eps_e,
        eps_e_raw,
        eps_u,
        best_split,
        best_thr: thr,
        eps_tin,
        eps_sic,
        evaluations,
        incumbent_history,
        frontier: Vec::new(),
    })
}

/// Swept configuration parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SweepVar {
    Rho,
    /// Sets n_U to the swept value and n_e = ratio · n_U.
    Blocklength { ratio: u64 },
}

/// Outcome at one sweep value.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: Result<OptResult>,
}

fn config_for(template: &SystemConfig, var: SweepVar, value: f64) -> Result<SystemConfig> {
    let mut cfg = template.clone();
    match var {
        SweepVar::Rho => cfg.rho = value,
        SweepVar::Blocklength { ratio } => {
            if !(value >= 1.0 && value.fract() == 0.0) {
                return Err(Error::InvalidConfig(format!("blocklength sweep value {value} is not a positive integer")));
            }
            cfg.n_u = value as u64;
            cfg.n_e = ratio * cfg.n_u;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs [`optimize`] at each value; failures are recorded per point. Each
/// successful result's frontier holds the (value, ε_e) pairs of the sweep.
pub fn sweep(template: &SystemConfig, var: SweepVar, values: &[f64], spec: &SearchSpec) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(Error::InvalidSearch("sweep needs at least one value".into()));
    }
    let mut points: Vec<SweepPoint> = values
        .iter()
        .map(|&value| SweepPoint { value, result: config_for(template, var, value).and_then(|c| optimize(&c, spec)) })
        .collect();
    let frontier: Vec<(f64, f64)> =
        points.iter().filter_map(|p| p.result.as_ref().ok().map(|r| (p.value, r.eps_e))).collect();
    for p in &mut points {
        if let Ok(r) = &mut p.result {
            r.frontier = frontier.clone();
        }
    }
    Ok(points)
}
