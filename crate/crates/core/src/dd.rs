//! Minimal double-double arithmetic for cancellation-heavy evaluations.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub(crate) const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub(crate) const LN_2: Self = Self {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };
    pub(crate) const EXP_EULER_GAMMA: Self = Self {
        hi: 1.781_072_417_990_198,
        lo: -1.275_802_401_983_757_8e-17,
    };

    pub(crate) fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub(crate) fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    pub(crate) fn hi(self) -> f64 {
        self.hi
    }

    pub(crate) fn lo(self) -> f64 {
        self.lo
    }

    /// Exact product of two doubles.
    pub(crate) fn product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn abs_hi(self) -> f64 {
        self.hi.abs()
    }

    pub(crate) fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, e) = two_sum(self.hi, -p1);
        let q2 = (s + (e - p2 + self.lo)) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    pub(crate) fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        Self::new(q1, q2) + Self::from_f64(q3)
    }

    /// `exp` for moderate arguments (`|x| < 700`).
    pub(crate) fn exp(self) -> Self {
        const SQUARINGS: i32 = 10;
        let k = (self.hi / Self::LN_2.hi).round();
        let r = (self - Self::LN_2.mul_f64(k)).mul_f64(2f64.powi(-SQUARINGS));
        // Taylor series of exp(r) - 1, |r| < 4e-4.
        let mut term = r;
        let mut sum = r;
        for n in 2..=12 {
            term = (term * r).div_f64(n as f64);
            sum = sum + term;
        }
        for _ in 0..SQUARINGS {
            // (1 + s)² - 1 = s (2 + s)
            sum = sum * (sum + Self::from_f64(2.0));
        }
        (sum + Self::ONE).mul_f64(2f64.powi(k as i32))
    }

    /// Natural logarithm of a positive value, one Newton step from the f64 guess.
    pub(crate) fn ln(self) -> Self {
        let guess = Self::from_f64(self.hi.ln());
        guess + self.div((guess).exp()) - Self::ONE
    }

    pub(crate) fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_third_times_three_is_one() {
        let third = DoubleDouble::ONE.div_f64(3.0);
        let back = third.mul_f64(3.0) - DoubleDouble::ONE;
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        for x in [1e-3, 0.37, 1.0, 2.5, 17.0, 1e5] {
            let d = DoubleDouble::from_f64(x);
            let back = d.ln().exp() - d;
            assert!(back.to_f64().abs() < 1e-30 * x, "x = {x}");
        }
    }

    #[test]
    fn ln_two_and_exp_gamma() {
        let l = DoubleDouble::from_f64(2.0).ln() - DoubleDouble::LN_2;
        assert!(l.to_f64().abs() < 1e-31);
        let g = DoubleDouble::from_f64(0.577_215_664_901_532_9).exp() - DoubleDouble::EXP_EULER_GAMMA;
        // the argument itself carries the f64 rounding of γ (about 2e-17 relative)
        assert!(g.to_f64().abs() < 1e-16);
    }

    #[test]
    fn recovers_bits_lost_in_plain_f64() {
        let big = DoubleDouble::from_f64(1e16);
        let sum = (big + DoubleDouble::ONE) - big;
        assert_eq!(sum.to_f64(), 1.0);
        let sq = DoubleDouble::product(1.0 + 2f64.powi(-30), 1.0 + 2f64.powi(-30));
        let residual = sq - DoubleDouble::from_f64(1.0 + 2f64.powi(-29));
        assert_eq!(residual.to_f64(), 2f64.powi(-60));
    }
}
