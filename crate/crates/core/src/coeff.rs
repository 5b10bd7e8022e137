//! Exact Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Rational with 128-bit numerator and denominator.
pub type Q = Ratio<i128>;

/// Exact complex rational number.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cq {
    pub re: Q,
    pub im: Q,
}

impl Cq {
    pub const fn from_parts(re: Q, im: Q) -> Self {
        Cq { re, im }
    }

    pub fn new(re: i128, im: i128) -> Self {
        Cq { re: Q::from_integer(re), im: Q::from_integer(im) }
    }

    /// `num/den` as a real number.
    pub fn frac(num: i128, den: i128) -> Self {
        Cq { re: Q::new(num, den), im: Q::zero() }
    }

    pub fn zero() -> Self {
        Cq::new(0, 0)
    }

    pub fn one() -> Self {
        Cq::new(1, 0)
    }

    pub fn i() -> Self {
        Cq::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(self) -> Self {
        Cq { re: self.re, im: -self.im }
    }

    /// Squared modulus, exact.
    pub fn norm_sqr(self) -> Q {
        self.re * self.re + self.im * self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Cq { re: self.re / n, im: -self.im / n })
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(q_to_f64(self.re), q_to_f64(self.im))
    }
}

fn q_to_f64(q: Q) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

impl From<i128> for Cq {
    fn from(v: i128) -> Self {
        Cq::new(v, 0)
    }
}

impl Add for Cq {
    type Output = Cq;
    fn add(self, o: Cq) -> Cq {
        Cq { re: self.re + o.re, im: self.im + o.im }
    }
}

impl AddAssign for Cq {
    fn add_assign(&mut self, o: Cq) {
        *self = *self + o;
    }
}

impl Sub for Cq {
    type Output = Cq;
    fn sub(self, o: Cq) -> Cq {
        Cq { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for Cq {
    type Output = Cq;
    fn mul(self, o: Cq) -> Cq {
        Cq { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Div for Cq {
    type Output = Cq;
    #[allow(clippy::suspicious_arithmetic_impl)]
    /// Panics on division by zero, like the rational type underneath.
    fn div(self, o: Cq) -> Cq {
        self * o.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for Cq {
    type Output = Cq;
    fn neg(self) -> Cq {
        Cq { re: -self.re, im: -self.im }
    }
}

fn fmt_q(q: &Q) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Cq {
    /// Canonical form `(re±imi)`, e.g. `(2+0i)`, `(-1/2-3i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}i)", fmt_q(&self.re), sign, fmt_q(&self.im.abs()))
    }
}
