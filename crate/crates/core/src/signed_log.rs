use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};

/// A real number stored as a sign and the natural logarithm of its
/// magnitude.
///
/// Zero is represented by `sign == 0` with `log_mag == -inf`; every
/// constructor normalises to that form, so exact zeros (for instance the
/// `(1 - p)^k` factors at `p = 1`) never turn into `-inf` arithmetic.
#[derive(Clone, Copy, Debug)]
pub struct SignedLog {
    sign: i8,
    log_mag: f64,
}

/// `ln(1 - e^d)` for `d <= 0`, accurate near both ends of the range.
fn ln_one_minus_exp(d: f64) -> f64 {
    debug_assert!(d <= 0.0);
    if d > -std::f64::consts::LN_2 {
        (-d.exp_m1()).ln()
    } else {
        (-d.exp()).ln_1p()
    }
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };
    pub const ONE: SignedLog = SignedLog {
        sign: 1,
        log_mag: 0.0,
    };

    pub fn new(sign: i8, log_mag: f64) -> Self {
        if sign == 0 || log_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLog {
                sign: sign.signum(),
                log_mag,
            }
        }
    }

    /// Positive value `e^{log_mag}`.
    pub fn from_ln(log_mag: f64) -> Self {
        Self::new(1, log_mag)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of `|self|`; `-inf` for zero.
    pub fn log_mag(&self) -> f64 {
        self.log_mag
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Plain real value. Underflows to `±0` and overflows to `±inf` outside
    /// the `f64` range.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_mag.exp(),
        }
    }

    pub fn abs(&self) -> Self {
        Self::new(self.sign.abs(), self.log_mag)
    }

    /// Square root; negative inputs are a caller bug and yield `NaN` magnitude.
    pub fn sqrt(&self) -> Self {
        match self.sign {
            0 => Self::ZERO,
            1 => Self::from_ln(0.5 * self.log_mag),
            _ => Self::new(1, f64::NAN),
        }
    }

    pub fn powi(&self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        let sign = if k % 2 == 0 { self.sign.abs() } else { self.sign };
        Self::new(sign, self.log_mag * f64::from(k))
    }

    /// Multiply by `e^{ln_factor}`.
    pub fn scale_ln(&self, ln_factor: f64) -> Self {
        Self::new(self.sign, self.log_mag + ln_factor)
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.log_mag.total_cmp(&other.log_mag),
                _ => other.log_mag.total_cmp(&self.log_mag),
            },
            ord => ord,
        }
    }
}

impl Default for SignedLog {
    fn default() -> Self {
        Self::ZERO
    }
}

impl PartialEq for SignedLog {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == 0 || self.log_mag == other.log_mag)
    }
}

impl PartialOrd for SignedLog {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.log_mag.is_nan() || other.log_mag.is_nan() {
            return None;
        }
        Some(self.total_cmp(other))
    }
}

impl From<f64> for SignedLog {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl fmt::Display for SignedLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let sign = if s < 0 { "-" } else { "" };
                write!(f, "{sign}exp({})", self.log_mag)
            }
        }
    }
}

impl Neg for SignedLog {
    type Output = SignedLog;

    fn neg(self) -> SignedLog {
        SignedLog::new(-self.sign, self.log_mag)
    }
}

impl Add for SignedLog {
    type Output = SignedLog;

    fn add(self, rhs: SignedLog) -> SignedLog {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_mag >= rhs.log_mag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = small.log_mag - big.log_mag;
        if big.sign == small.sign {
            SignedLog::new(big.sign, big.log_mag + d.exp().ln_1p())
        } else if d == 0.0 {
            SignedLog::ZERO
        } else {
            SignedLog::new(big.sign, big.log_mag + ln_one_minus_exp(d))
        }
    }
}

impl AddAssign for SignedLog {
    fn add_assign(&mut self, rhs: SignedLog) {
        *self = *self + rhs;
    }
}

impl Sub for SignedLog {
    type Output = SignedLog;

    fn sub(self, rhs: SignedLog) -> SignedLog {
        self + (-rhs)
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;

    fn mul(self, rhs: SignedLog) -> SignedLog {
        SignedLog::new(self.sign * rhs.sign, self.log_mag + rhs.log_mag)
    }
}

impl MulAssign for SignedLog {
    fn mul_assign(&mut self, rhs: SignedLog) {
        *self = *self * rhs;
    }
}

impl Div for SignedLog {
    type Output = SignedLog;

    fn div(self, rhs: SignedLog) -> SignedLog {
        if rhs.sign == 0 {
            return SignedLog::new(self.sign, f64::NAN);
        }
        SignedLog::new(self.sign * rhs.sign, self.log_mag - rhs.log_mag)
    }
}

impl Sum for SignedLog {
    fn sum<I: Iterator<Item = SignedLog>>(iter: I) -> SignedLog {
        let mut acc = LogSum::default();
        for x in iter {
            acc.push(x);
        }
        acc.total()
    }
}

#[derive(Clone, Copy, Debug)]
struct Partial {
    max: f64,
    acc: f64,
}

impl Default for Partial {
    fn default() -> Self {
        Partial {
            max: f64::NEG_INFINITY,
            acc: 0.0,
        }
    }
}

impl Partial {
    fn push(&mut self, l: f64) {
        if l == f64::NEG_INFINITY {
            return;
        }
        if l <= self.max {
            self.acc += (l - self.max).exp();
        } else {
            self.acc = self.acc * (self.max - l).exp() + 1.0;
            self.max = l;
        }
    }

    fn value(&self) -> SignedLog {
        if self.acc == 0.0 {
            SignedLog::ZERO
        } else {
            SignedLog::from_ln(self.max + self.acc.ln())
        }
    }
}

/// Streaming log-sum-exp accumulator for signed terms.
///
/// Positive and negative terms are summed separately and cancelled once at
/// the end, so the result loses at most the precision implied by the final
/// cancellation ratio.
#[derive(Clone, Copy, Debug, Default)]
pub struct LogSum {
    pos: Partial,
    neg: Partial,
}

impl LogSum {
    pub fn push(&mut self, x: SignedLog) {
        match x.sign {
            0 => {}
            1 => self.pos.push(x.log_mag),
            _ => self.neg.push(x.log_mag),
        }
    }

    pub fn total(&self) -> SignedLog {
        self.pos.value() - self.neg.value()
    }
}
