use rand::Rng;
use rand_distr::StandardNormal;

/// Uniform point on the centered sphere of the given radius in ℝⁿ.
pub fn sample_sphere<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> Vec<f64> {
    let mut x = vec![0.0; n];
    fill_sphere(&mut x, radius, rng);
    x
}

/// Writes a uniform sphere point into `out`.
pub fn fill_sphere<R: Rng + ?Sized>(out: &mut [f64], radius: f64, rng: &mut R) {
    loop {
        for v in out.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            let s = radius / norm;
            out.iter_mut().for_each(|v| *v *= s);
            return;
        }
    }
}
