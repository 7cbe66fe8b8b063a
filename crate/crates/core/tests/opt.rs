use dpcbound::baseline::time_sharing_bound;
use dpcbound::bounds::{evaluate, BoundOptions};
use dpcbound::model::*;
use dpcbound::opt::*;
use dpcbound::Error;
use proptest::prelude::*;

fn desk(rho: f64) -> SystemConfig {
    SystemConfig { power: 5.0, channel_gain: 1.0, n_e: 72, n_u: 24, rho, l_e: 4, l_u: 4, l_v: 4 }
}

fn small_spec(obj: Objective, target: f64) -> SearchSpec {
    SearchSpec {
        alpha: Grid::Values(vec![0.2, 0.6, 0.95]),
        beta_e: Grid::Values(vec![0.05, 0.3, 0.7]),
        delta_frac: Grid::Values(vec![0.1, 0.5]),
        gamma_u: Some(Grid::Values(vec![2.0, 6.0, 12.0])),
        gamma_e: Some(Grid::Values(vec![1.0, 3.0, 6.0])),
        gamma_e_tilde: Some(Grid::Values(vec![1.0, 4.0])),
        refine_rounds: 0,
        ..SearchSpec::new(obj, target)
    }
}

/// Lexicographic (clamped, raw) minimum over the full grid, by brute force.
fn brute_force(cfg: &SystemConfig, spec: &SearchSpec) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    let gt = match spec.objective {
        Objective::Tin => None,
        _ => Some(spec.gamma_e_tilde.as_ref().unwrap().points()),
    };
    for &a in &spec.alpha.points() {
        for &b in &spec.beta_e.points() {
            for &f in &spec.delta_frac.points() {
                let split = PowerSplit::with_delta_fraction(cfg, a, b, f);
                for &gu in &spec.gamma_u.as_ref().unwrap().points() {
                    for &ge in &spec.gamma_e.as_ref().unwrap().points() {
                        for &t in gt.clone().unwrap_or_else(|| vec![ge]).iter() {
                            let thr = Thresholds { gamma_u: gu, gamma_e: ge, gamma_e_tilde: t };
                            let Ok(r) = evaluate(cfg, &split, &thr, BoundOptions::default()) else { continue };
                            if r.eps_u > spec.urllc_target {
                                continue;
                            }
                            let key = match spec.objective {
                                Objective::Sic => (r.eps_sic, r.eps_sic_raw),
                                _ => (r.eps_tin, r.eps_tin_raw),
                            };
                            if best.is_none_or(|k| key < k) {
                                best = Some(key);
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

#[test]
fn vacuous_target_gives_unconstrained_grid_minimum() {
    for obj in [Objective::Tin, Objective::Sic] {
        for rho in [0.2, 0.7] {
            let cfg = SystemConfig { power: 40.0, ..desk(rho) };
            let spec = small_spec(obj, 1.0);
            let r = optimize(&cfg, &spec).unwrap();
            assert!(r.feasible);
            let (v, raw) = brute_force(&cfg, &spec).unwrap();
            assert_eq!((r.eps_e, r.eps_e_raw), (v, raw), "{obj:?} rho={rho}");
        }
    }
}

#[test]
fn constrained_search_matches_brute_force() {
    let cfg = SystemConfig { power: 40.0, ..desk(0.5) };
    let spec = small_spec(Objective::Tin, 0.05);
    let r = optimize(&cfg, &spec).unwrap();
    match brute_force(&cfg, &spec) {
        Some((v, raw)) => assert!(r.feasible && (r.eps_e, r.eps_e_raw) == (v, raw)),
        None => assert!(!r.feasible),
    }
}

#[test]
fn unreachable_target_is_infeasible_with_diagnostic() {
    let cfg = desk(0.5);
    let r = optimize(&cfg, &SearchSpec { refine_rounds: 2, ..small_spec(Objective::Tin, 1e-300) }).unwrap();
    assert!(!r.feasible);
    assert_eq!(r.incumbent_history, vec![None; 3]);
    assert!(r.eps_u > 1e-300);
    assert!(r.best_split.is_some());
}

#[test]
fn feasible_points_reevaluate_within_target() {
    let cfg = SystemConfig { power: 40.0, ..desk(0.5) };
    for obj in [Objective::Tin, Objective::Sic] {
        let spec = SearchSpec { refine_rounds: 2, ..small_spec(obj, 0.05) };
        let r = optimize(&cfg, &spec).unwrap();
        if r.feasible {
            let full = evaluate(&cfg, &r.best_split.unwrap(), &r.best_thr, BoundOptions::default()).unwrap();
            assert!(full.eps_u <= 0.05);
            assert_eq!(full.eps_u, r.eps_u);
            assert_eq!(Some(full.eps_tin), r.eps_tin);
            assert_eq!(Some(full.eps_sic), r.eps_sic);
        }
    }
}

#[test]
fn tin_result_reports_sic_at_matching_threshold() {
    let r = optimize(&desk(0.5), &small_spec(Objective::Tin, 1.0)).unwrap();
    assert_eq!(r.best_thr.gamma_e_tilde, r.best_thr.gamma_e);
    assert_eq!(r.eps_tin, Some(r.eps_e));
}

#[test]
fn time_sharing_objective() {
    let cfg = SystemConfig { power: 40.0, ..desk(0.3) };
    let spec = SearchSpec { gamma_u: Some(Grid::Values(vec![2.0, 8.0])), gamma_e: Some(Grid::Values(vec![1.0, 4.0])), ..SearchSpec::new(Objective::Ts, 1.0) };
    let r = optimize(&cfg, &SearchSpec { refine_rounds: 0, ..spec }).unwrap();
    assert!(r.best_split.is_none() && r.eps_tin.is_none());
    let mut best = f64::INFINITY;
    for gu in [2.0, 8.0] {
        for ge in [1.0, 4.0] {
            let t = time_sharing_bound(&cfg, &Thresholds { gamma_u: gu, gamma_e: ge, gamma_e_tilde: ge }, BoundOptions::default()).unwrap();
            best = best.min(t.eps_e_ts);
        }
    }
    assert_eq!(r.eps_e, best);
}

#[test]
fn optimization_is_deterministic() {
    let cfg = desk(0.5);
    let spec = SearchSpec { refine_rounds: 2, ..small_spec(Objective::Sic, 0.2) };
    assert_eq!(optimize(&cfg, &spec).unwrap(), optimize(&cfg, &spec).unwrap());
}

#[test]
fn refinement_history_is_monotone() {
    let cfg = SystemConfig { power: 40.0, ..desk(0.5) };
    let spec = SearchSpec { refine_rounds: 4, ..small_spec(Objective::Tin, 0.5) };
    let r = optimize(&cfg, &spec).unwrap();
    assert_eq!(r.incumbent_history.len(), 5);
    assert!(r.feasible && r.incumbent_history[0].is_some());
    for w in r.incumbent_history.windows(2) {
        assert!(w[1].unwrap() <= w[0].unwrap());
    }
    let coarse = optimize(&cfg, &SearchSpec { refine_rounds: 0, ..spec.clone() }).unwrap();
    assert!(r.eps_e <= coarse.eps_e);
    assert!(r.evaluations > coarse.evaluations);
}

#[test]
fn grid_parsing_and_spacing() {
    assert_eq!(Grid::parse("lin:0:1:3").unwrap().points(), vec![0.0, 0.5, 1.0]);
    let g = Grid::parse("log:1:100:3").unwrap().points();
    assert_eq!((g[0], g[2]), (1.0, 100.0));
    assert!((g[1] - 10.0).abs() < 1e-12);
    assert_eq!(Grid::parse("lin:2:5:1").unwrap().points(), vec![2.0]);
    for bad in ["lin:0:1", "cubic:0:1:3", "lin:a:1:3", "lin:0:1:-2"] {
        assert!(Grid::parse(bad).is_none(), "{bad}");
    }
    let d = SearchSpec::new(Objective::Tin, 1e-5);
    assert_eq!(d.alpha.points().len(), 21);
    assert_eq!(d.beta_e.points().len(), 21);
    assert_eq!(d.delta_frac.points().len(), 4);
    let gg = SearchSpec::default_gamma_grid(1000, 1e-5).points();
    assert_eq!(gg.len(), 31);
    let c = (1000.0f64 / 1e-5).ln();
    assert!(gg[0] < c && gg[30] > c);
}

#[test]
fn invalid_specs_are_rejected() {
    let cfg = desk(0.5);
    let bad = [
        SearchSpec { alpha: Grid::Values(vec![]), ..small_spec(Objective::Tin, 1.0) },
        SearchSpec { alpha: Grid::Values(vec![1.2]), ..small_spec(Objective::Tin, 1.0) },
        SearchSpec { beta_e: Grid::Values(vec![0.0]), ..small_spec(Objective::Tin, 1.0) },
        SearchSpec { gamma_u: Some(Grid::Values(vec![-1.0])), ..small_spec(Objective::Tin, 1.0) },
        small_spec(Objective::Tin, 0.0),
        small_spec(Objective::Tin, 1.5),
    ];
    for s in bad {
        assert!(matches!(optimize(&cfg, &s), Err(Error::InvalidSearch(_))), "{s:?}");
    }
}

#[test]
fn singleton_sweep_equals_optimize() {
    let cfg = desk(0.1);
    let spec = SearchSpec { refine_rounds: 1, ..small_spec(Objective::Tin, 0.2) };
    let pts = sweep(&cfg, SweepVar::Rho, &[0.4], &spec).unwrap();
    let mut swept = pts[0].result.clone().unwrap();
    let direct = optimize(&desk(0.4), &spec).unwrap();
    assert_eq!(swept.frontier, vec![(0.4, direct.eps_e)]);
    swept.frontier.clear();
    assert_eq!(swept, direct);
}

#[test]
fn blocklength_sweep_rebuilds_config_and_records_failures() {
    let spec = SearchSpec { gamma_u: None, gamma_e: None, gamma_e_tilde: None, ..small_spec(Objective::Tin, 0.5) };
    let pts = sweep(&desk(0.5), SweepVar::Blocklength { ratio: 3 }, &[12.0, 7.5, 24.0], &spec).unwrap();
    assert_eq!(pts.len(), 3);
    assert!(pts[0].result.is_ok() && pts[2].result.is_ok());
    assert!(matches!(pts[1].result, Err(Error::InvalidConfig(_))));
    let direct = optimize(&SystemConfig { n_u: 12, n_e: 36, ..desk(0.5) }, &spec).unwrap();
    assert_eq!(pts[0].result.as_ref().unwrap().eps_e, direct.eps_e);
    assert_eq!(pts[2].result.as_ref().unwrap().frontier.len(), 2);
    assert!(matches!(sweep(&desk(0.5), SweepVar::Rho, &[], &spec), Err(Error::InvalidSearch(_))));
}

#[test]
fn fig2_operating_point_meets_urllc_target() {
    let cfg = SystemConfig { power: 5.0, channel_gain: 1.0, n_e: 600, n_u: 200, rho: 0.6, l_e: 1000, l_u: 100, l_v: 1000 };
    let r = optimize(&cfg, &SearchSpec::new(Objective::Tin, 1e-5)).unwrap();
    assert!(r.feasible && r.eps_u <= 1e-5);
    assert!(r.eps_e < 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn result_invariants(rho in 0.0f64..=1.0, target in 1e-6f64..1.0, rounds in 0u32..3, sic in any::<bool>()) {
        let obj = if sic { Objective::Sic } else { Objective::Tin };
        let spec = SearchSpec { refine_rounds: rounds, ..small_spec(obj, target) };
        let r = optimize(&desk(rho), &spec).unwrap();
        prop_assert!(!r.feasible || r.eps_u <= target);
        prop_assert_eq!(r.eps_e, r.eps_e_raw.clamp(0.0, 1.0));
        prop_assert_eq!(r.incumbent_history.len(), rounds as usize + 1);
        for w in r.incumbent_history.windows(2) {
            if let Some(prev) = w[0] {
                prop_assert!(w[1].is_some_and(|v| v <= prev));
            }
        }
        prop_assert_eq!(r.feasible, r.incumbent_history.last().unwrap().is_some());
    }
}
