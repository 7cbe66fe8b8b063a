use serde::{Deserialize, Serialize};

/// A real number stored as `sign * exp(log_magnitude)`.
///
/// Zero is represented by `sign == 0`; its `log_magnitude` is stored as 0 so
/// the value always serializes to finite JSON.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    pub log_magnitude: f64,
    pub sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { log_magnitude: 0.0, sign: 0 };
    pub const ONE: LogValue = LogValue { log_magnitude: 0.0, sign: 1 };

    /// Positive value `exp(l)`. `l = -inf` gives zero.
    pub fn from_ln(l: f64) -> Self {
        if l == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { log_magnitude: l, sign: 1 }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue { log_magnitude: x.abs().ln(), sign: if x > 0.0 { 1 } else { -1 } }
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_magnitude.exp(),
        }
    }

    /// Natural log of a nonnegative value (`-inf` for zero, NaN for negative).
    pub fn ln(self) -> f64 {
        match self.sign {
            0 => f64::NEG_INFINITY,
            1 => self.log_magnitude,
            _ => f64::NAN,
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// True when the stored representation is well formed.
    pub fn is_finite(self) -> bool {
        self.sign == 0 || self.log_magnitude.is_finite()
    }

    pub fn mul(self, o: Self) -> Self {
        if self.sign == 0 || o.sign == 0 {
            return Self::ZERO;
        }
        LogValue { log_magnitude: self.log_magnitude + o.log_magnitude, sign: self.sign * o.sign }
    }

    /// Division; dividing by zero yields a NaN magnitude.
    pub fn div(self, o: Self) -> Self {
        if o.sign == 0 {
            return LogValue { log_magnitude: f64::NAN, sign: self.sign.max(1) };
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        LogValue { log_magnitude: self.log_magnitude - o.log_magnitude, sign: self.sign * o.sign }
    }

    /// Integer power with `0^0 = 1`.
    pub fn powi(self, k: u64) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && k % 2 == 1 { -1 } else { 1 };
        LogValue { log_magnitude: self.log_magnitude * k as f64, sign }
    }

    pub fn neg(self) -> Self {
        LogValue { log_magnitude: self.log_magnitude, sign: -self.sign }
    }

    pub fn add(self, o: Self) -> Self {
        if self.sign == 0 {
            return o;
        }
        if o.sign == 0 {
            return self;
        }
        let (big, small) =
            if self.log_magnitude >= o.log_magnitude { (self, o) } else { (o, self) };
        let r = (small.log_magnitude - big.log_magnitude).exp();
        if big.sign == small.sign {
            LogValue { log_magnitude: big.log_magnitude + r.ln_1p(), sign: big.sign }
        } else if r == 1.0 {
            Self::ZERO
        } else {
            LogValue { log_magnitude: big.log_magnitude + (-r).ln_1p(), sign: big.sign }
        }
    }
}
