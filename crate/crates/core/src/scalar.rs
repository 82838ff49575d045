//! Scalar representations for long products of weights.
//!
//! [`LogScalar`] keeps a complex number as `(ln|z|, arg z)` and is what the
//! criterion engine compares against thresholds. [`ScaledComplex`] keeps a
//! complex mantissa together with a binary exponent; products of weights are
//! accumulated in it so that exact values (powers of two, small integer
//! products) stay exact and nothing saturates before the final conversion.

use std::f64::consts::{LN_2, PI, TAU};
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduces an angle to `(-pi, pi]`.
pub fn reduce_phase(phase: f64) -> f64 {
    let r = phase.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Complex scalar in polar log form. `logmag == -inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogScalar {
    logmag: f64,
    phase: f64,
}

impl LogScalar {
    pub fn new(logmag: f64, phase: f64) -> Self {
        if logmag == f64::NEG_INFINITY {
            return Self::zero();
        }
        Self {
            logmag,
            phase: reduce_phase(phase),
        }
    }

    pub fn one() -> Self {
        Self {
            logmag: 0.0,
            phase: 0.0,
        }
    }

    pub fn zero() -> Self {
        Self {
            logmag: f64::NEG_INFINITY,
            phase: 0.0,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::zero();
        }
        Self::new(z.norm().ln(), z.arg())
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn logmag(&self) -> f64 {
        self.logmag
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn is_zero(&self) -> bool {
        self.logmag == f64::NEG_INFINITY
    }

    pub fn checked_recip(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(-self.logmag, -self.phase))
        }
    }

    /// `self^count`, with the log-magnitude scaled by `count`.
    pub fn powu(self, count: u64) -> Self {
        if count == 0 {
            return Self::one();
        }
        if self.is_zero() {
            return self;
        }
        let c = count as f64;
        Self::new(self.logmag * c, self.phase * c)
    }

    pub fn to_scaled(self) -> ScaledComplex {
        if self.is_zero() {
            return ScaledComplex::zero();
        }
        let exp2 = (self.logmag / LN_2).floor();
        let rem = self.logmag - exp2 * LN_2;
        let mag = rem.exp();
        ScaledComplex::new(Complex64::from_polar(mag, self.phase), exp2 as i64)
    }

    pub fn to_complex(self) -> Result<Complex64> {
        self.to_scaled().to_complex()
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;

    fn mul(self, rhs: LogScalar) -> LogScalar {
        if self.is_zero() || rhs.is_zero() {
            return LogScalar::zero();
        }
        LogScalar::new(self.logmag + rhs.logmag, self.phase + rhs.phase)
    }
}

/// Complex value `mantissa * 2^exp2` with `max(|re|, |im|)` of the mantissa
/// in `[0.5, 1)` (or an all-zero mantissa with `exp2 == 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    mantissa: Complex64,
    exp2: i64,
}

impl ScaledComplex {
    pub fn new(mantissa: Complex64, exp2: i64) -> Self {
        let big = mantissa.re.abs().max(mantissa.im.abs());
        if big == 0.0 || !big.is_finite() {
            return Self {
                mantissa: if big == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    mantissa
                },
                exp2: if big == 0.0 { 0 } else { exp2 },
            };
        }
        let (_, e) = libm::frexp(big);
        let shift = -e;
        Self {
            mantissa: Complex64::new(
                libm::ldexp(mantissa.re, shift),
                libm::ldexp(mantissa.im, shift),
            ),
            exp2: exp2 + i64::from(e),
        }
    }

    pub fn zero() -> Self {
        Self {
            mantissa: Complex64::new(0.0, 0.0),
            exp2: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_complex(Complex64::new(1.0, 0.0))
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn log_magnitude(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.norm().ln() + self.exp2 as f64 * LN_2
    }

    pub fn powu(self, mut count: u64) -> Self {
        let mut acc = Self::one();
        let mut base = self;
        while count > 0 {
            if count & 1 == 1 {
                acc = acc * base;
            }
            count >>= 1;
            if count > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// Converts to a double-precision complex. Values below the subnormal
    /// range flush to zero; values above `f64::MAX` are an error.
    pub fn to_complex(self) -> Result<Complex64> {
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if self.exp2 > 1100 {
            return Err(Error::Overflow {
                logmag: self.log_magnitude(),
            });
        }
        if self.exp2 < -1200 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let e = self.exp2 as i32;
        let z = Complex64::new(
            libm::ldexp(self.mantissa.re, e),
            libm::ldexp(self.mantissa.im, e),
        );
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Overflow {
                logmag: self.log_magnitude(),
            });
        }
        Ok(z)
    }
}

impl Mul for ScaledComplex {
    type Output = ScaledComplex;

    fn mul(self, rhs: ScaledComplex) -> ScaledComplex {
        if self.is_zero() || rhs.is_zero() {
            return ScaledComplex::zero();
        }
        ScaledComplex::new(self.mantissa * rhs.mantissa, self.exp2 + rhs.exp2)
    }
}

impl Div for ScaledComplex {
    type Output = ScaledComplex;

    /// Division by zero yields a non-finite mantissa; callers guarantee
    /// nonzero divisors through the weight floor.
    fn div(self, rhs: ScaledComplex) -> ScaledComplex {
        if self.is_zero() {
            return ScaledComplex::zero();
        }
        let m = if rhs.mantissa.im == 0.0 {
            Complex64::new(
                self.mantissa.re / rhs.mantissa.re,
                self.mantissa.im / rhs.mantissa.re,
            )
        } else {
            self.mantissa / rhs.mantissa
        };
        ScaledComplex::new(m, self.exp2 - rhs.exp2)
    }
}
