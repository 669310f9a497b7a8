//! Exact and log-space combinatorics shared by the state builders.
//!
//! Binomials that enter multiplicatively are handled as logarithms; the
//! alternating convolution sums of the closed-form amplitudes are evaluated
//! exactly over the Gaussian integers so that the cancellation between
//! terms of size `binom(N, k)` costs no precision.

use std::f64::consts::LN_2;

use num_complex::Complex64;

/// Largest total photon number for which every binomial `binom(N, k)` and
/// every convolution sum fits in an `i128`.
pub const MAX_EXACT_PHOTONS: usize = 128;

/// `ln Γ(x)`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `ln binom(n, k)`; `-inf` when `k > n`.
pub fn ln_binom(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln 2^n`.
pub fn ln_pow2(n: usize) -> f64 {
    n as f64 * LN_2
}

/// Exact binomial coefficient; `None` on overflow.
pub fn binom_exact(n: usize, k: usize) -> Option<i128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: i128 = 1;
    for i in 0..k {
        // (i + 1) divides c·(n − i); split it between the factors first.
        let d = i as i128 + 1;
        let g = gcd(c, d);
        c = (c / g).checked_mul((n - i) as i128 / (d / g))?;
    }
    Some(c)
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Power of the imaginary unit, `i^e`, tracked as an exponent mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuarterTurn(u8);

impl QuarterTurn {
    pub const ONE: QuarterTurn = QuarterTurn(0);

    pub fn new(exponent: i64) -> Self {
        QuarterTurn(exponent.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn times(self, other: QuarterTurn) -> Self {
        QuarterTurn((self.0 + other.0) % 4)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

/// Exact complex integer `re + i·im`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GaussianInt {
    pub re: i128,
    pub im: i128,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };

    pub fn new(re: i128, im: i128) -> Self {
        GaussianInt { re, im }
    }

    /// `value · i^turn`, exact.
    pub fn rotated(value: i128, turn: QuarterTurn) -> Self {
        match turn.exponent() {
            0 => GaussianInt::new(value, 0),
            1 => GaussianInt::new(0, value),
            2 => GaussianInt::new(-value, 0),
            _ => GaussianInt::new(0, -value),
        }
    }

    pub fn checked_add(self, rhs: Self) -> Option<Self> {
        Some(GaussianInt::new(
            self.re.checked_add(rhs.re)?,
            self.im.checked_add(rhs.im)?,
        ))
    }

    pub fn checked_mul(self, rhs: Self) -> Option<Self> {
        let re = self
            .re
            .checked_mul(rhs.re)?
            .checked_sub(self.im.checked_mul(rhs.im)?)?;
        let im = self
            .re
            .checked_mul(rhs.im)?
            .checked_add(self.im.checked_mul(rhs.re)?)?;
        Some(GaussianInt::new(re, im))
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}
