use super::codebook::{Codebooks, Matrix};
use crate::model::{PowerSplit, SystemConfig};
use rand::Rng;
use rand_distr::StandardNormal;

/// Relative slack on the shell and power checks, absorbing rounding only.
pub(crate) const NORM_SLACK: f64 = 1e-12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Picks a uniformly random bin j of message `m` whose DPC output
/// V(m, j) − α X^(e,2) lands in the shell [n_U β_U P − δ_b, n_U β_U P].
/// Returns the chosen bin and the URLLC input, or `None` if no bin fits.
pub fn dpc_encode<R: Rng + ?Sized>(
    v: &Matrix,
    m: usize,
    l_v: usize,
    xe2: &[f64],
    split: &PowerSplit,
    cfg: &SystemConfig,
    rng: &mut R,
) -> Option<(usize, Vec<f64>)> {
    let upper = cfg.n_u as f64 * split.beta_u * cfg.power;
    let lower = upper - split.delta_b;
    let slack = NORM_SLACK * upper.max(1.0);
    let candidates: Vec<usize> = (0..l_v)
        .filter(|&j| {
            let row = v.row(m * l_v + j);
            let norm2: f64 = row.iter().zip(xe2).map(|(a, x)| (a - split.alpha * x).powi(2)).sum();
            norm2 >= lower - slack && norm2 <= upper + slack
        })
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let j = candidates[rng.random_range(0..candidates.len())];
    let row = v.row(m * l_v + j);
    Some((j, row.iter().zip(xe2).map(|(a, x)| a - split.alpha * x).collect()))
}

/// Transmitted blocks, channel outputs and power bookkeeping of one trial.
#[derive(Clone, Debug)]
pub struct Transmission {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Vec<f64>>,
    /// Total energy over the n_e channel uses.
    pub energy: f64,
    /// max_b (‖X_b‖² − len_b P), possibly negative.
    pub max_block_excess: f64,
    pub power_ok: bool,
}

/// Assembles each block's input and passes it through Y = hX + Z.
///
/// `urllc[b]` holds the DPC output for blocks in B_sent. With `noiseless`
/// the noise is forced to zero.
pub fn transmit<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    books: &Codebooks,
    ell: usize,
    urllc: &[Option<Vec<f64>>],
    noiseless: bool,
    rng: &mut R,
) -> Transmission {
    let h = cfg.channel_gain;
    let mut x = Vec::with_capacity(books.xe1.len());
    for (b, xe1) in books.xe1.iter().enumerate() {
        let block = match urllc.get(b).and_then(|u| u.as_ref()) {
            Some(xu) => xu.iter().zip(books.xe2[b].row(ell)).map(|(a, c)| a + c).collect(),
            None => xe1.row(ell).to_vec(),
        };
        x.push(block);
    }
    let mut energy = 0.0;
    let mut max_block_excess = f64::NEG_INFINITY;
    for block in &x {
        let e = dot(block, block);
        energy += e;
        max_block_excess = max_block_excess.max(e - block.len() as f64 * cfg.power);
    }
    let y = x
        .iter()
        .map(|block| {
            block
                .iter()
                .map(|&xi| {
                    let z: f64 = if noiseless { 0.0 } else { rng.sample(StandardNormal) };
                    h * xi + z
                })
                .collect()
        })
        .collect();
    let budget = cfg.n_e as f64 * cfg.power;
    let power_ok = energy <= budget * (1.0 + NORM_SLACK);
    Transmission { x, y, energy, max_block_excess, power_ok }
}
