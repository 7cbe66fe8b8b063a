//! Special functions used by the bounds: incomplete gamma, gamma ratios,
//! the sphere-coordinate law and a log-domain number type.

mod gamma;
mod logvalue;
pub mod quad;
mod sphere;

pub use gamma::{
    chi_square_cdf, gamma_ratio_half, ln_binomial, ln_gamma, ln_gamma_half_ratio, reg_gamma_lower,
    reg_gamma_upper,
};
pub use logvalue::LogValue;
pub use sphere::{kappa, sphere_coord_norm, sphere_coord_prob, sphere_coord_prob_tol};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialError {
    #[error("{func}: domain error: {detail}")]
    Domain { func: &'static str, detail: String },
    #[error("{func}: no convergence: {detail}")]
    NoConvergence { func: &'static str, detail: String },
}
