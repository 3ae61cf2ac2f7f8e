//! Real-argument Bessel functions of low integer order.
//!
//! Every transcendental condition in this crate reduces to `K_0`, `K_1`,
//! `K_2` of a real argument; the zero-energy heavy-heavy solution needs
//! `J_1` and `Y_1`. Only orders 0..=2 (K) and 0..=1 (J, Y) are provided.
//!
//! Evaluation strategy and crossovers:
//!
//! | function | `x <= 2` | `2 < x <= 20` | `x > 20` |
//! |----------|----------|---------------|----------|
//! | `K_0, K_1` | ascending series | trapezoidal rule on `∫ e^{-x cosh t} cosh(νt) dt` | Hankel asymptotic series |
//! | `J_0, J_1, Y_0, Y_1` | ascending series (double-double) | ascending series (double-double) | Hankel asymptotic series |
//!
//! `K_2` always comes from the upward recurrence `K_2 = K_0 + 2 K_1 / x`,
//! which is stable for `K`.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::dd::DoubleDouble;
use thiserror::Error;

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `e^γ`.
pub const EXP_EULER_GAMMA: f64 = 1.781_072_417_990_198;

const K_SERIES_MAX: f64 = 2.0;
const JY_SERIES_MAX: f64 = 20.0;
const ASYMPTOTIC_MIN: f64 = 20.0;

/// Trapezoid step for the `K` integral representation on `(2, 20]`.
const K_TRAPEZOID_STEP: f64 = 0.075;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("{function}: argument {x} outside domain")]
    Domain { function: &'static str, x: f64 },
    #[error("{function}: order {order} not supported")]
    UnsupportedOrder { function: &'static str, order: u32 },
}

/// A function value with a conservative estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub est_abs_error: f64,
}

impl SpecFunResult {
    fn relative(value: f64, rel: f64) -> Self {
        Self {
            value,
            est_abs_error: (value * rel).abs(),
        }
    }
}

/// Modified Bessel function of the second kind `K_order(x)`, `order ∈ {0,1,2}`.
pub fn bessel_k(order: u32, x: f64) -> Result<f64, SpecFunError> {
    bessel_k_checked(order, x).map(|r| r.value)
}

pub fn bessel_k_checked(order: u32, x: f64) -> Result<SpecFunResult, SpecFunError> {
    if order > 2 {
        return Err(SpecFunError::UnsupportedOrder {
            function: "bessel_k",
            order,
        });
    }
    if !(x > 0.0) || x.is_nan() {
        return Err(SpecFunError::Domain {
            function: "bessel_k",
            x,
        });
    }
    let (k, rel) = k_triple_with_rel(x);
    Ok(SpecFunResult::relative(k[order as usize], rel))
}

/// Bessel function of the first kind `J_order(x)`, `order ∈ {0,1}`, `x >= 0`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64, SpecFunError> {
    bessel_j_checked(order, x).map(|r| r.value)
}

pub fn bessel_j_checked(order: u32, x: f64) -> Result<SpecFunResult, SpecFunError> {
    if order > 1 {
        return Err(SpecFunError::UnsupportedOrder {
            function: "bessel_j",
            order,
        });
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain {
            function: "bessel_j",
            x,
        });
    }
    let (j, _, err) = jy(order, x, false);
    Ok(SpecFunResult {
        value: j,
        est_abs_error: err,
    })
}

/// Bessel function of the second kind `Y_order(x)`, `order ∈ {0,1}`, `x > 0`.
pub fn bessel_y(order: u32, x: f64) -> Result<f64, SpecFunError> {
    bessel_y_checked(order, x).map(|r| r.value)
}

pub fn bessel_y_checked(order: u32, x: f64) -> Result<SpecFunResult, SpecFunError> {
    if order > 1 {
        return Err(SpecFunError::UnsupportedOrder {
            function: "bessel_y",
            order,
        });
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain {
            function: "bessel_y",
            x,
        });
    }
    let (_, y, err) = jy(order, x, true);
    Ok(SpecFunResult {
        value: y,
        est_abs_error: err,
    })
}

/// `[K_0(x), K_1(x), K_2(x)]` for `x > 0`. No domain checking.
pub fn k012(x: f64) -> [f64; 3] {
    k_triple_with_rel(x).0
}

fn k_triple_with_rel(x: f64) -> ([f64; 3], f64) {
    let (k0, k1, rel) = if x <= K_SERIES_MAX {
        let (a, b) = k01_series(x);
        (a, b, 1e-15)
    } else if x <= ASYMPTOTIC_MIN {
        let (a, b) = k01_trapezoid(x);
        (a, b, 1e-15)
    } else {
        let (a, ea) = k_asymptotic(0, x);
        let (b, eb) = k_asymptotic(1, x);
        (a, b, ea.max(eb).max(1e-16))
    };
    ([k0, k1, k0 + 2.0 * k1 / x], rel)
}

fn k01_series(x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let q = half * half;
    let log_term = half.ln() + EULER_GAMMA;

    // i0 = Σ q^k/(k!)^2, s0 = Σ H_k q^k/(k!)^2
    // i1s = Σ q^k/(k!(k+1)!), s1 = Σ (H_k + H_{k+1}) q^k/(k!(k+1)!)
    let mut t0 = 1.0;
    let mut t1 = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut s0 = 0.0;
    let mut i1s = 1.0;
    let mut s1 = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        let next_harmonic = harmonic + 1.0 / (kf + 1.0);
        i0 += t0;
        s0 += harmonic * t0;
        i1s += t1;
        s1 += (harmonic + next_harmonic) * t1;
        if t0 * next_harmonic < 1e-18 * i0 {
            break;
        }
    }
    let k0 = -log_term * i0 + s0;
    let k1 = 1.0 / x + log_term * half * i1s - 0.5 * half * s1;
    (k0, k1)
}

fn k01_trapezoid(x: f64) -> (f64, f64) {
    // K_ν(x) e^x = ∫_0^∞ exp(-x (cosh t - 1)) cosh(ν t) dt, cosh t - 1 = 2 sinh²(t/2)
    let h = K_TRAPEZOID_STEP;
    let mut s0 = 0.5;
    let mut s1 = 0.5;
    let mut j = 1;
    loop {
        let t = h * j as f64;
        let sh = (0.5 * t).sinh();
        let w = (-2.0 * x * sh * sh).exp();
        let c = t.cosh();
        s0 += w;
        s1 += w * c;
        if w * c < 1e-18 * s1 {
            break;
        }
        j += 1;
    }
    let scale = h * (-x).exp();
    (s0 * scale, s1 * scale)
}

/// Large-argument expansion `K_ν(x) ≈ sqrt(π/2x) e^{-x} Σ a_k(ν)/x^k`.
fn k_asymptotic(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut last = 1.0_f64;
    for k in 1..80 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (kf * 8.0 * x);
        if next.abs() > last.abs() {
            break;
        }
        term = next;
        last = term;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    let prefactor = (PI / (2.0 * x)).sqrt() * (-x).exp();
    (prefactor * sum, (last / sum).abs())
}

/// Returns `(J_ν, Y_ν, estimated absolute error)`; Y is only computed on request.
fn jy(nu: u32, x: f64, want_y: bool) -> (f64, f64, f64) {
    if x <= JY_SERIES_MAX {
        let (j, y) = jy_series(nu, x, want_y);
        let scale = if want_y { y.abs() } else { j.abs() };
        (j, y, 1e-15 * scale.max(1e-300) + 1e-16 * envelope(x))
    } else {
        let (j, y, rel) = jy_asymptotic(nu, x);
        (j, y, (rel + 1e-16 * x) * envelope(x))
    }
}

fn envelope(x: f64) -> f64 {
    if x < 1.0 {
        1.0
    } else {
        (FRAC_2_PI / x).sqrt()
    }
}

fn jy_series(nu: u32, x: f64, want_y: bool) -> (f64, f64) {
    let half = 0.5 * x;
    // q = (x/2)^2 carried exactly
    let q = DoubleDouble::product(half, half);
    let mut term = DoubleDouble::ONE;
    let mut sum_j = DoubleDouble::ONE;
    let mut sum_y = DoubleDouble::ZERO;
    let mut harmonic = DoubleDouble::ZERO;
    let mut peak = 1.0_f64;

    if nu == 0 {
        // J0 = Σ (-q)^k/(k!)^2 ; Y0 series part Σ H_k (-q)^k/(k!)^2
        for k in 1..200u32 {
            let kf = k as f64;
            term = -(term * q).div_f64(kf * kf);
            harmonic = harmonic + DoubleDouble::ONE.div_f64(kf);
            sum_j = sum_j + term;
            if want_y {
                sum_y = sum_y + harmonic * term;
            }
            peak = peak.max(term.abs_hi());
            if kf > half && term.abs_hi() * (1.0 + harmonic.to_f64()) < 1e-33 * peak {
                break;
            }
        }
        let j0 = sum_j.to_f64();
        let y0 = if want_y {
            let log_term = half.ln() + EULER_GAMMA;
            FRAC_2_PI * (sum_j.mul_f64(log_term) - sum_y).to_f64()
        } else {
            0.0
        };
        (j0, y0)
    } else {
        // J1 = (x/2) Σ (-q)^k/(k!(k+1)!) ; Y1 part Σ (H_k + H_{k+1}) (-q)^k/(k!(k+1)!)
        let mut next_harmonic = DoubleDouble::ONE;
        sum_y = DoubleDouble::ONE;
        for k in 1..200u32 {
            let kf = k as f64;
            term = -(term * q).div_f64(kf * (kf + 1.0));
            harmonic = next_harmonic;
            next_harmonic = harmonic + DoubleDouble::ONE.div_f64(kf + 1.0);
            sum_j = sum_j + term;
            if want_y {
                sum_y = sum_y + (harmonic + next_harmonic) * term;
            }
            peak = peak.max(term.abs_hi());
            if kf > half && term.abs_hi() * (1.0 + next_harmonic.to_f64()) < 1e-33 * peak {
                break;
            }
        }
        let j1 = sum_j.mul_f64(half).to_f64();
        let y1 = if want_y {
            let log_term = half.ln() + EULER_GAMMA;
            let series = (sum_j.mul_f64(2.0 * log_term) - sum_y).mul_f64(half);
            (series.to_f64() - 2.0 / x) / PI
        } else {
            0.0
        };
        (j1, y1)
    }
}

fn jy_asymptotic(nu: u32, x: f64) -> (f64, f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = 1.0_f64;
    for k in 1..120u32 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (kf * 8.0 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        last = term;
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 1 {
            q += signed;
        } else {
            p += signed;
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // χ = x - (ν/2 + 1/4)π
    let (cos_chi, sin_chi) = if nu == 0 {
        (r * (c + s), r * (s - c))
    } else {
        (r * (s - c), -r * (s + c))
    };
    let amp = (FRAC_2_PI / x).sqrt();
    let j = amp * (p * cos_chi - q * sin_chi);
    let y = amp * (p * sin_chi + q * cos_chi);
    (j, y, last.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn reference_values() {
        assert!(rel(bessel_k(0, 1.0).unwrap(), 0.421_024_438_240_708_34) < 1e-14);
        assert!(rel(bessel_j(0, 1.0).unwrap(), 0.765_197_686_557_966_6) < 1e-14);
        assert!(rel(bessel_y(0, 1.0).unwrap(), 0.088_256_964_215_676_96) < 1e-13);
    }

    #[test]
    fn j1_first_zero_and_origin() {
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert!(bessel_j(1, 3.831_705_970_2).unwrap().abs() < 1e-9);
    }

    #[test]
    fn y1_leading_singularity() {
        let x = 1e-6;
        let scaled = x * bessel_y(1, x).unwrap();
        assert!((scaled + FRAC_2_PI).abs() < 1e-8);
    }

    #[test]
    fn k0_large_argument_matches_leading_asymptote() {
        let x = 50.0;
        let lead = (PI / (2.0 * x)).sqrt() * (-x).exp();
        assert!(rel(bessel_k(0, x).unwrap(), lead) < 1e-2);
        assert!(rel(bessel_k(0, x).unwrap(), lead) > 1e-4);
    }

    #[test]
    fn k_underflows_to_zero_far_out() {
        assert_eq!(bessel_k(0, 800.0).unwrap(), 0.0);
        assert!(bessel_k(2, 700.0).unwrap() > 0.0);
    }

    #[test]
    fn wronskian_j1y0_minus_j0y1() {
        for &x in &[0.5, 5.0, 50.0] {
            let w =
                bessel_j(1, x).unwrap() * bessel_y(0, x).unwrap() - bessel_j(0, x).unwrap() * bessel_y(1, x).unwrap();
            assert!(rel(w, 2.0 / (PI * x)) < 1e-10, "x={x} w={w}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_k(0, 0.0), Err(SpecFunError::Domain { .. })));
        assert!(matches!(bessel_k(1, -1.0), Err(SpecFunError::Domain { .. })));
        assert!(matches!(bessel_j(0, -1e-3), Err(SpecFunError::Domain { .. })));
        assert!(matches!(bessel_y(1, 0.0), Err(SpecFunError::Domain { .. })));
        assert!(matches!(bessel_k(3, 1.0), Err(SpecFunError::UnsupportedOrder { .. })));
        assert!(matches!(bessel_j(2, 1.0), Err(SpecFunError::UnsupportedOrder { .. })));
    }

    #[test]
    fn crossovers_are_continuous() {
        for &edge in &[K_SERIES_MAX, ASYMPTOTIC_MIN] {
            let below = k012(edge * (1.0 - 1e-15));
            let above = k012(edge * (1.0 + 1e-15));
            for m in 0..3 {
                assert!(rel(below[m], above[m]) < 1e-11, "K{m} at {edge}");
            }
        }
        for nu in 0..2 {
            let a = bessel_y(nu, JY_SERIES_MAX).unwrap();
            let b = bessel_y(nu, JY_SERIES_MAX * (1.0 + 1e-13)).unwrap();
            assert!((a - b).abs() < 1e-11);
        }
    }
}
