//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use super::SpecialError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate`]. Convergence requires the summed error
/// estimate to satisfy both the absolute and the relative bound.
#[derive(Clone, Copy, Debug)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        QuadTolerance { abs: 1e-12, rel: 1e-10, max_subdivisions: 10_000 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    Segment { a, b, value: kron * h, error: ((kron - gauss) * h).abs() }
}

/// Integrates `f` over `[a, b]`, bisecting the segment with the largest
/// error estimate until the tolerance is met.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: QuadTolerance) -> Result<QuadResult, SpecialError> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(SpecialError::Domain { func: "integrate", detail: format!("bounds [{a}, {b}] must be finite") });
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, subdivisions: 0 });
    }
    let mut segs = vec![gk15(&f, a, b)];
    let mut subdivisions = 0;
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(SpecialError::NoConvergence { func: "integrate", detail: "non-finite integrand".into() });
        }
        if error == 0.0 || (error <= tol.abs && error <= tol.rel * value.abs()) {
            return Ok(QuadResult { value, error, subdivisions });
        }
        if subdivisions >= tol.max_subdivisions {
            return Err(SpecialError::NoConvergence {
                func: "integrate",
                detail: format!("error estimate {error:e} after {subdivisions} subdivisions"),
            });
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, s)| if s.error > best.1 { (i, s.error) } else { best });
        let s = segs.swap_remove(idx);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(SpecialError::NoConvergence { func: "integrate", detail: "segment below float resolution".into() });
        }
        segs.push(gk15(&f, s.a, mid));
        segs.push(gk15(&f, mid, s.b));
        subdivisions += 1;
    }
}
