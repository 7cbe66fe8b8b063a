use super::sphere::fill_sphere;
use crate::model::{PowerSplit, SystemConfig};
use rand::Rng;

/// Row-major collection of equal-length real vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    rows: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn sphere<R: Rng + ?Sized>(rows: usize, dim: usize, radius: f64, rng: &mut R) -> Self {
        let mut data = vec![0.0; rows * dim];
        if dim > 0 {
            for row in data.chunks_mut(dim) {
                fill_sphere(row, radius, rng);
            }
        }
        Matrix { dim, rows, data }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Random codebooks of one trial, shared by transmitter and receiver.
#[derive(Clone, Debug, PartialEq)]
pub struct Codebooks {
    /// `v[b]` row `m * L_v + j` is V_b(m, j), radius √(n_U β_v P).
    pub v: Vec<Matrix>,
    /// `xe1[b]` row ℓ is X_b^(e,1)(ℓ), radius √(len·P); index η is the tail when present.
    pub xe1: Vec<Matrix>,
    /// `xe2[b]` row ℓ is X_b^(e,2)(ℓ), radius √(n_U β_e P).
    pub xe2: Vec<Matrix>,
    pub l_v: usize,
}

impl Codebooks {
    pub fn generate<R: Rng + ?Sized>(cfg: &SystemConfig, split: &PowerSplit, rng: &mut R) -> Self {
        let n = cfg.n_u as usize;
        let eta = cfg.eta() as usize;
        let tail = cfg.tail_len() as usize;
        let p = cfg.power;
        let (le, lu, lv) = (cfg.l_e as usize, cfg.l_u as usize, cfg.l_v as usize);
        let rv = (n as f64 * split.beta_v() * p).sqrt();
        let r1 = (n as f64 * p).sqrt();
        let r2 = (n as f64 * split.beta_e * p).sqrt();
        let v = (0..eta).map(|_| Matrix::sphere(lu * lv, n, rv, rng)).collect();
        let mut xe1: Vec<Matrix> = (0..eta).map(|_| Matrix::sphere(le, n, r1, rng)).collect();
        if tail > 0 {
            xe1.push(Matrix::sphere(le, tail, (tail as f64 * p).sqrt(), rng));
        }
        let xe2 = (0..eta).map(|_| Matrix::sphere(le, n, r2, rng)).collect();
        Codebooks { v, xe1, xe2, l_v: lv }
    }

    /// V_b(m, j).
    pub fn codeword_v(&self, b: usize, m: usize, j: usize) -> &[f64] {
        self.v[b].row(m * self.l_v + j)
    }

    /// Bytes needed to hold all codebooks of one trial.
    pub fn footprint_bytes(cfg: &SystemConfig) -> u128 {
        let n = u128::from(cfg.n_u);
        let eta = u128::from(cfg.eta());
        let (le, lu, lv) = (u128::from(cfg.l_e), u128::from(cfg.l_u), u128::from(cfg.l_v));
        let vectors = le * eta + le * eta + lu * lv * eta;
        8 * (vectors * n + le * u128::from(cfg.tail_len()))
    }
}
