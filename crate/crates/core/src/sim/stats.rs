use serde::{Deserialize, Serialize};

const Z95: f64 = 1.959_963_984_540_054;

/// Empirical rate with a Wilson 95% interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub events: u64,
    pub total: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    pub fn wilson(events: u64, total: u64) -> Self {
        if total == 0 {
            return Estimate { events, total, rate: 0.0, ci_low: 0.0, ci_high: 1.0 };
        }
        let n = total as f64;
        let p = events as f64 / n;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        Estimate {
            events,
            total,
            rate: p,
            ci_low: if events == 0 { 0.0 } else { (center - half).max(0.0) },
            ci_high: if events >= total { 1.0 } else { (center + half).min(1.0) },
        }
    }
}
