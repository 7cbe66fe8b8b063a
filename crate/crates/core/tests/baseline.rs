use dpcbound::baseline::*;
use dpcbound::bounds::{evaluate, BoundOptions};
use dpcbound::model::*;
use proptest::prelude::*;

fn fig2(rho: f64) -> SystemConfig {
    SystemConfig { power: 5.0, channel_gain: 1.0, n_e: 600, n_u: 200, rho, l_e: 1000, l_u: 100, l_v: 1000 }
}

fn desk(rho: f64) -> SystemConfig {
    SystemConfig { power: 5.0, channel_gain: 1.0, n_e: 72, n_u: 24, rho, l_e: 4, l_u: 4, l_v: 4 }
}

fn thr(gu: f64, ge: f64) -> Thresholds {
    Thresholds { gamma_u: gu, gamma_e: ge, gamma_e_tilde: ge }
}

#[test]
fn zero_rho_matches_scheme_pure_embb_bound() {
    let opts = BoundOptions::default();
    for cfg in [fig2(0.0), desk(0.0), SystemConfig { power: 40.0, ..desk(0.0) }] {
        for ge in [2.0, 6.0, 12.0] {
            let ts = time_sharing_bound(&cfg, &thr(400.0, ge), opts).unwrap();
            for split in [PowerSplit::new(0.5, 0.5, 1.0), PowerSplit::new(0.9, 0.1, 0.5)] {
                let r = evaluate(&cfg, &split, &thr(400.0, ge), opts).unwrap();
                assert!((ts.eps_e_ts - r.eps_tin).abs() <= 1e-12, "{} vs {}", ts.eps_e_ts, r.eps_tin);
                assert!((ts.per_k[0].t.unwrap() - r.per_k[0].t.unwrap()).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn full_puncturing_leaves_nothing() {
    let ts = time_sharing_bound(&fig2(1.0), &thr(20.0, 10.0), BoundOptions::default()).unwrap();
    assert_eq!(ts.eps_e_ts, 1.0);
    let last = ts.per_k.last().unwrap();
    assert_eq!((last.k, last.residual_len), (3, 0));
    assert!(last.vacuous && last.weight == 1.0);
}

#[test]
fn full_puncturing_with_tail_uses_tail() {
    let cfg = SystemConfig { power: 40.0, n_e: 82, ..desk(1.0) };
    let ts = time_sharing_bound(&cfg, &thr(20.0, 1.0), BoundOptions::default()).unwrap();
    let last = ts.per_k.last().unwrap();
    assert_eq!(last.residual_len, 10);
    assert!(!last.vacuous);
}

#[test]
fn residual_lengths_and_weights() {
    let cfg = SystemConfig { n_e: 610, ..fig2(0.3) };
    let ts = time_sharing_bound(&cfg, &thr(20.0, 10.0), BoundOptions::default()).unwrap();
    let total: f64 = ts.per_k.iter().map(|t| t.weight).sum();
    assert!((total - 1.0).abs() < 1e-14);
    for t in &ts.per_k {
        assert_eq!(t.residual_len, 610 - t.k * 200);
        assert!((0.0..=1.0).contains(&t.bound));
    }
    assert!((ts.per_k[1].weight - 3.0 * 0.3 * 0.49).abs() < 1e-14);
}

#[test]
fn urllc_at_zero_rho_is_false_alarm() {
    let ts = time_sharing_bound(&desk(0.0), &thr(3.0, 3.0), BoundOptions::default()).unwrap();
    assert_eq!(ts.eps_u_ts_raw, ts.qblock.q1);
    assert_eq!(ts.qblock.zeta, 1.0);
}

#[test]
fn evaluator_matches_one_shot() {
    let cfg = desk(0.4);
    let ev = TsEvaluator::new(&cfg, BoundOptions::default()).unwrap();
    let t = thr(7.0, 2.0);
    let full = time_sharing_bound(&cfg, &t, BoundOptions::default()).unwrap();
    assert_eq!(ev.urllc(t.gamma_u).unwrap().0, full.eps_u_ts_raw);
    assert_eq!(ev.embb(t.gamma_e).unwrap().0, full.eps_e_ts_raw);
    assert_eq!(ev.report(&t).unwrap(), full);
}

#[test]
fn report_field_names() {
    let ts = time_sharing_bound(&desk(0.4), &thr(7.0, 2.0), BoundOptions::default()).unwrap();
    let v = serde_json::to_value(&ts).unwrap();
    assert!(v.get("eps_U_ts").is_some() && v.get("eps_e_ts").is_some());
    assert!(v["per_k"][0].get("residual_len").is_some());
}

#[test]
fn embb_nondecreasing_in_rho_on_grid() {
    for base in [fig2(0.0), SystemConfig { power: 40.0, ..desk(0.0) }] {
        for ge in [1.0, 5.0, 15.0] {
            let mut prev = 0.0;
            for i in 0..=50 {
                let cfg = SystemConfig { rho: i as f64 / 50.0, ..base.clone() };
                let e = time_sharing_bound(&cfg, &thr(20.0, ge), BoundOptions::default()).unwrap().eps_e_ts;
                assert!(e >= prev - 1e-15, "rho {} ge {ge}: {e} < {prev}", cfg.rho);
                prev = e;
            }
        }
    }
}

proptest! {
    #[test]
    fn bounds_clamped(rho in 0.0f64..=1.0, gu in 0.1f64..50.0, ge in 0.1f64..50.0, p in 0.5f64..50.0) {
        let cfg = SystemConfig { power: p, ..desk(rho) };
        let ts = time_sharing_bound(&cfg, &thr(gu, ge), BoundOptions::default()).unwrap();
        prop_assert_eq!(ts.eps_u_ts, ts.eps_u_ts_raw.clamp(0.0, 1.0));
        prop_assert_eq!(ts.eps_e_ts, ts.eps_e_ts_raw.clamp(0.0, 1.0));
        for t in &ts.per_k {
            prop_assert!(t.residual_len <= cfg.n_e);
            prop_assert!(!t.vacuous || t.bound == 1.0);
        }
    }
}
