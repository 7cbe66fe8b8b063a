//! Marginal law of one coordinate of a uniform point on a sphere.

use super::gamma::ln_gamma_half_ratio;
use super::quad::{integrate, QuadTolerance};
use super::SpecialError;
use std::f64::consts::PI;

/// κ_n(x) = ∫₀ˣ (1 − t²)ⁿ dt via the integration-by-parts recursion.
pub fn kappa(n: u64, x: f64) -> Result<f64, SpecialError> {
    if !(x.abs() <= 1.0) {
        return Err(SpecialError::Domain { func: "kappa", detail: format!("|x| = {} exceeds 1", x.abs()) });
    }
    let w = 1.0 - x * x;
    let mut k = x;
    let mut p = 1.0;
    for i in 1..=n {
        let m = i as f64;
        p *= w;
        k = x * p / (2.0 * m + 1.0) + 2.0 * m / (2.0 * m + 1.0) * k;
    }
    Ok(k)
}

/// Normalizing constant of the coordinate density in units of the radius:
/// Γ(n/2) / (√π Γ((n−1)/2)).
pub fn sphere_coord_norm(n: u64) -> f64 {
    (ln_gamma_half_ratio((n as f64 - 1.0) / 2.0)).exp() / PI.sqrt()
}

/// Pr[a ≤ X₁ ≤ b] for X uniform on the sphere in ℝⁿ with squared radius `radius2`.
pub fn sphere_coord_prob(n: u64, radius2: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    sphere_coord_prob_tol(n, radius2, a, b, QuadTolerance::default())
}

/// As [`sphere_coord_prob`] with explicit quadrature tolerances.
pub fn sphere_coord_prob_tol(n: u64, radius2: f64, a: f64, b: f64, tol: QuadTolerance) -> Result<f64, SpecialError> {
    if n < 3 {
        return Err(SpecialError::Domain { func: "sphere_coord_prob", detail: format!("dimension {n} < 3") });
    }
    if !(radius2 > 0.0) {
        return Err(SpecialError::Domain { func: "sphere_coord_prob", detail: "radius² must be positive".into() });
    }
    if !(a <= b) {
        return Err(SpecialError::Domain { func: "sphere_coord_prob", detail: format!("interval [{a}, {b}] is reversed") });
    }
    let r = radius2.sqrt();
    let lo = (a / r).max(-1.0);
    let hi = (b / r).min(1.0);
    if lo >= hi {
        return Ok(0.0);
    }
    let m = (n as f64 - 3.0) / 2.0;
    let density = move |t: f64| {
        if m == 0.0 {
            1.0
        } else {
            let w = 1.0 - t * t;
            if w <= 0.0 {
                0.0
            } else {
                (m * w.ln()).exp()
            }
        }
    };
    let c = sphere_coord_norm(n);
    let res = integrate(density, lo, hi, tol)?;
    Ok((c * res.value).clamp(0.0, 1.0))
}
