//! Threshold and maximum-metric decoders built on Gaussian surrogate
//! output densities.

use super::codebook::Codebooks;
use crate::model::Derived;

fn dist2_scaled(y: &[f64], c: f64, x: &[f64]) -> f64 {
    y.iter().zip(x).map(|(a, b)| (a - c * b).powi(2)).sum()
}

fn norm2(y: &[f64]) -> f64 {
    y.iter().map(|a| a * a).sum()
}

/// ln N(y; h v, σ₃² I) − ln N(y; 0, σ² I).
pub fn urllc_metric(y: &[f64], v: &[f64], h: f64, d: &Derived) -> f64 {
    let n = y.len() as f64;
    n / 2.0 * (d.sigma2 / d.sigma3_2).ln() + norm2(y) / (2.0 * d.sigma2) - dist2_scaled(y, h, v) / (2.0 * d.sigma3_2)
}

/// ln N(y; h x, I) − ln N(y; 0, σ² I): block carrying only X^(e,1).
pub fn embb_plain_metric(y: &[f64], x: &[f64], h: f64, d: &Derived) -> f64 {
    let n = y.len() as f64;
    n / 2.0 * d.sigma2.ln() + norm2(y) / (2.0 * d.sigma2) - dist2_scaled(y, h, x) / 2.0
}

/// ln N(y; h(1−α) x, σ₂² I) − ln N(y; 0, σ² I): URLLC treated as noise.
pub fn embb_tin_metric(y: &[f64], x2: &[f64], h: f64, alpha: f64, d: &Derived) -> f64 {
    let n = y.len() as f64;
    n / 2.0 * (d.sigma2 / d.sigma2_2).ln() + norm2(y) / (2.0 * d.sigma2)
        - dist2_scaled(y, h * (1.0 - alpha), x2) / (2.0 * d.sigma2_2)
}

/// ln N(y; h v + h(1−α) x, I) − ln N(y; h v, σ₃² I): URLLC codeword subtracted.
pub fn embb_sic_metric(y: &[f64], x2: &[f64], v: &[f64], h: f64, alpha: f64, d: &Derived) -> f64 {
    let n = y.len() as f64;
    let r: Vec<f64> = y.iter().zip(v).map(|(a, b)| a - h * b).collect();
    n / 2.0 * d.sigma3_2.ln() + norm2(&r) / (2.0 * d.sigma3_2) - dist2_scaled(&r, h * (1.0 - alpha), x2) / 2.0
}

/// Outcome of URLLC detection in one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UrllcEstimate {
    pub detected: bool,
    /// Decoded (message, bin); `None` is the "no message" output.
    pub estimate: Option<(usize, usize)>,
}

/// Maximizes the surrogate metric over all (m, j), ties to the lowest pair,
/// and declares detection when the maximum exceeds γ_U.
pub fn urllc_decode(y: &[f64], books: &Codebooks, b: usize, gamma_u: f64, h: f64, d: &Derived) -> UrllcEstimate {
    let rows = books.v[b].rows();
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    for r in 0..rows {
        let s = urllc_metric(y, books.v[b].row(r), h, d);
        if s > best {
            best = s;
            arg = r;
        }
    }
    if best > gamma_u {
        UrllcEstimate { detected: true, estimate: Some((arg / books.l_v, arg % books.l_v)) }
    } else {
        UrllcEstimate { detected: false, estimate: None }
    }
}

/// TIN eMBB decoder: argmax over ℓ of the summed surrogate metric, using the
/// X^(e,2) term in detected blocks and the X^(e,1) term elsewhere.
pub fn embb_decode_tin(y: &[Vec<f64>], books: &Codebooks, detected: &[bool], h: f64, alpha: f64, d: &Derived) -> usize {
    argmax(books, |ell| {
        y.iter()
            .enumerate()
            .map(|(b, yb)| {
                if detected.get(b).copied().unwrap_or(false) {
                    embb_tin_metric(yb, books.xe2[b].row(ell), h, alpha, d)
                } else {
                    embb_plain_metric(yb, books.xe1[b].row(ell), h, d)
                }
            })
            .sum()
    })
}

/// SIC eMBB decoder: in blocks with a decoded URLLC estimate the estimated
/// codeword is subtracted; elsewhere as TIN.
pub fn embb_decode_sic(
    y: &[Vec<f64>],
    books: &Codebooks,
    estimates: &[UrllcEstimate],
    h: f64,
    alpha: f64,
    d: &Derived,
) -> usize {
    argmax(books, |ell| {
        y.iter()
            .enumerate()
            .map(|(b, yb)| match estimates.get(b) {
                Some(UrllcEstimate { detected: true, estimate: Some((m, j)) }) => {
                    embb_sic_metric(yb, books.xe2[b].row(ell), books.codeword_v(b, *m, *j), h, alpha, d)
                }
                Some(UrllcEstimate { detected: true, estimate: None }) => embb_tin_metric(yb, books.xe2[b].row(ell), h, alpha, d),
                _ => embb_plain_metric(yb, books.xe1[b].row(ell), h, d),
            })
            .sum()
    })
}

fn argmax<F: Fn(usize) -> f64>(books: &Codebooks, metric: F) -> usize {
    let l_e = books.xe1.first().map(|m| m.rows()).unwrap_or(1);
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    for ell in 0..l_e {
        let s = metric(ell);
        if s > best {
            best = s;
            arg = ell;
        }
    }
    arg
}
