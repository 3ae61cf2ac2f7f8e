//! Low-energy heavy-light two-body scattering in two dimensions.
//!
//! Natural units throughout: ħ = μ = r1 = 1. Energies are in ħ²/(μ r1²),
//! lengths in r1.

use std::f64::consts::{FRAC_2_PI, PI};

use thiserror::Error;

use crate::roots;
use crate::specfun::{EULER_GAMMA, EXP_EULER_GAMMA};

/// `|cot δ|` below this marks a T-matrix pole.
pub const POLE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwoBodyError {
    #[error("{name} = {value} outside domain")]
    Domain { name: &'static str, value: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no p-wave pole for a1_inv = {a1_inv}")]
    NoPole { a1_inv: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<f64, TwoBodyError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(TwoBodyError::Domain { name, value })
    }
}

/// Light mass `m`, heavy mass `M` and the derived reduced mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassConfig {
    pub m: f64,
    pub big_m: f64,
    pub mu: f64,
    pub nu0: f64,
}

impl MassConfig {
    pub fn new(m: f64, big_m: f64) -> Result<Self, TwoBodyError> {
        positive("m", m)?;
        positive("M", big_m)?;
        let mu = 2.0 * m * big_m / (m + 2.0 * big_m);
        Ok(Self {
            m,
            big_m,
            mu,
            nu0: big_m / mu,
        })
    }

    /// Masses in units of the light mass.
    pub fn from_ratio(m_over_big_m: f64) -> Result<Self, TwoBodyError> {
        Self::new(1.0, 1.0 / positive("m/M", m_over_big_m)?)
    }

    /// The heavy mass `M/m` that yields a given `nu0`.
    pub fn from_nu0(nu0: f64) -> Result<Self, TwoBodyError> {
        if !(nu0 > 0.5) {
            return Err(TwoBodyError::Domain {
                name: "nu0",
                value: nu0,
            });
        }
        Self::new(1.0, nu0 - 0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBodyParams {
    pub a0: f64,
    pub a1_inv: f64,
    pub r1: f64,
    pub r0: f64,
}

impl TwoBodyParams {
    pub fn new(a0: f64, a1_inv: f64, r0: f64) -> Result<Self, TwoBodyError> {
        let p = Self {
            a0,
            a1_inv,
            r1: 1.0,
            r0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Finite p-wave scattering length `a1 = 1/a1_inv`.
    pub fn with_a1(a0: f64, a1: f64, r0: f64) -> Result<Self, TwoBodyError> {
        Self::new(a0, 1.0 / positive("a1", a1)?, r0)
    }

    pub fn validate(&self) -> Result<(), TwoBodyError> {
        positive("a0", self.a0)?;
        positive("r0", self.r0)?;
        if !(self.a1_inv >= 0.0) || !self.a1_inv.is_finite() {
            return Err(TwoBodyError::Domain {
                name: "a1_inv",
                value: self.a1_inv,
            });
        }
        if self.r1 != 1.0 {
            return Err(TwoBodyError::InvalidParams(format!(
                "r1 is the length unit and must be 1, got {}",
                self.r1
            )));
        }
        let bound = 0.5 * EXP_EULER_GAMMA * self.r0;
        if self.r1 > bound {
            return Err(TwoBodyError::InvalidParams(format!(
                "r1 = {} exceeds e^γ r0 / 2 = {bound}",
                self.r1
            )));
        }
        Ok(())
    }

    pub fn a1(&self) -> f64 {
        1.0 / self.a1_inv
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBodyDerived {
    pub eps0: f64,
    /// `-kappa1² / 2` from the numerical pole.
    pub eps1: f64,
    /// Large-`a1` closed form.
    pub eps1_closed: f64,
    pub kappa1: f64,
    /// Range of the off-resonance p-wave potentials; `INFINITY` at resonance.
    pub range_r1: f64,
}

/// `cot δ0(iκ) = (2/π)[γ + ln(κ a0 / 2)]`.
pub fn cot_delta0(kappa: f64, a0: f64) -> Result<f64, TwoBodyError> {
    positive("kappa", kappa)?;
    positive("a0", a0)?;
    Ok(FRAC_2_PI * (EULER_GAMMA + (0.5 * kappa * a0).ln()))
}

/// `cot δ1(iκ) = (2/π)[a1_inv / κ² + ln κ]`.
pub fn cot_delta1(kappa: f64, a1_inv: f64) -> Result<f64, TwoBodyError> {
    positive("kappa", kappa)?;
    if !(a1_inv >= 0.0) {
        return Err(TwoBodyError::Domain {
            name: "a1_inv",
            value: a1_inv,
        });
    }
    Ok(FRAC_2_PI * (a1_inv / (kappa * kappa) + kappa.ln()))
}

/// On-shell T-matrix element on the imaginary momentum axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TMatrix {
    /// `T_m = -1 / (π cot δ_m)`; infinite exactly at the pole.
    pub value: f64,
    pub cot_delta: f64,
    pub near_pole: bool,
}

pub fn t_matrix(order: u32, kappa: f64, params: &TwoBodyParams) -> Result<TMatrix, TwoBodyError> {
    let cot = match order {
        0 => cot_delta0(kappa, params.a0)?,
        1 => cot_delta1(kappa, params.a1_inv)?,
        _ => {
            return Err(TwoBodyError::Domain {
                name: "order",
                value: order as f64,
            })
        }
    };
    Ok(TMatrix {
        value: -1.0 / (PI * cot),
        cot_delta: cot,
        near_pole: cot.abs() < POLE_THRESHOLD,
    })
}

/// Pole `κ1` of `T_1`: smallest root of `a1_inv/κ² + ln κ = 0`.
///
/// A bound state exists only for `0 < a1_inv < 1/(2e)`.
pub fn pwave_pole(a1_inv: f64) -> Result<f64, TwoBodyError> {
    if !(a1_inv > 0.0) || a1_inv.is_infinite() {
        return Err(TwoBodyError::NoPole { a1_inv });
    }
    let f = |k: f64| a1_inv / (k * k) + k.ln();
    // f has its minimum at sqrt(2 a1_inv); the physical pole lies below it.
    let hi = (2.0 * a1_inv).sqrt().min(1.0);
    let lo = 1e-8_f64;
    if f(hi) >= 0.0 || f(lo) <= 0.0 {
        return Err(TwoBodyError::NoPole { a1_inv });
    }
    let root = roots::bisect(f, lo, hi, 0.0).map_err(|_| TwoBodyError::NoPole { a1_inv })?;
    Ok(root.x)
}

/// Dimer energies and the p-wave range.
///
/// At exact resonance (`a1_inv = 0`) the p-wave dimer sits at threshold:
/// `eps1 = 0`, `kappa1 = 0` and `range_r1 = INFINITY`.
pub fn dimer_energies(params: &TwoBodyParams) -> Result<TwoBodyDerived, TwoBodyError> {
    params.validate()?;
    let eps0 = -2.0 * (-2.0 * EULER_GAMMA).exp() / (params.a0 * params.a0);
    if params.a1_inv == 0.0 {
        return Ok(TwoBodyDerived {
            eps0,
            eps1: 0.0,
            eps1_closed: 0.0,
            kappa1: 0.0,
            range_r1: f64::INFINITY,
        });
    }
    let kappa1 = pwave_pole(params.a1_inv)?;
    let a1 = params.a1();
    let half = 0.5 * a1;
    Ok(TwoBodyDerived {
        eps0,
        eps1: -0.5 * kappa1 * kappa1,
        eps1_closed: -1.0 / (a1 * half.ln()),
        kappa1,
        range_r1: range_r1(a1)?,
    })
}

/// `R1 = sqrt((a1/2) ln(a1/2))`, defined for `a1 > 2`.
pub fn range_r1(a1: f64) -> Result<f64, TwoBodyError> {
    if !(a1 > 2.0) {
        return Err(TwoBodyError::Domain { name: "a1", value: a1 });
    }
    let half = 0.5 * a1;
    Ok((half * half.ln()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(a0: f64, a1: f64) -> TwoBodyParams {
        TwoBodyParams::with_a1(a0, a1, 1.2).unwrap()
    }

    #[test]
    fn nu0_from_masses() {
        let mc = MassConfig::new(1.0, 10.0).unwrap();
        assert_relative_eq!(mc.mu, 20.0 / 21.0, max_relative = 1e-15);
        assert_relative_eq!(mc.nu0, 10.5, max_relative = 1e-15);
        assert_relative_eq!(MassConfig::from_nu0(20.0).unwrap().nu0, 20.0, max_relative = 1e-15);
        assert!(MassConfig::new(3.0, 2.01).unwrap().nu0 > 1.0);
    }

    #[test]
    fn cot_delta0_examples() {
        let a0 = 10.0;
        assert!(cot_delta0(2.0 * (-EULER_GAMMA).exp() / a0, a0).unwrap().abs() < 1e-15);
        let k = 2.0 * (1.0 - EULER_GAMMA).exp() / a0;
        assert_relative_eq!(cot_delta0(k, a0).unwrap(), FRAC_2_PI, max_relative = 1e-14);
        assert_relative_eq!(
            cot_delta0(0.01, 10.0).unwrap(),
            -1.539_675_492_867_542_7,
            max_relative = 1e-14
        );
        assert!(cot_delta0(0.0, 1.0).is_err());
    }

    #[test]
    fn cot_delta1_examples() {
        assert_eq!(cot_delta1(1.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            cot_delta1(0.1, 0.01).unwrap(),
            -0.829_251_425_391_274,
            max_relative = 1e-14
        );
        assert!(cot_delta1(-1.0, 0.0).is_err());
    }

    #[test]
    fn t_matrix_resonant_pwave() {
        let p = TwoBodyParams::new(10.0, 0.0, 1.2).unwrap();
        let t = t_matrix(1, 0.5, &p).unwrap();
        assert_relative_eq!(t.value, -1.0 / (PI * FRAC_2_PI * 0.5_f64.ln()), max_relative = 1e-14);
        assert!(!t.near_pole);
        assert!(t_matrix(2, 0.5, &p).is_err());
    }

    #[test]
    fn t_matrix_flags_dimer_pole() {
        let p = params(10.0, 100.0);
        let d = dimer_energies(&p).unwrap();
        assert!(t_matrix(1, d.kappa1, &p).unwrap().near_pole);
        let k0 = 2.0 * (-EULER_GAMMA).exp() / p.a0;
        assert!(t_matrix(0, k0, &p).unwrap().near_pole);
    }

    #[test]
    fn dimer_values() {
        let d = dimer_energies(&params(10.0, 100.0)).unwrap();
        assert_relative_eq!(d.eps0, -6.304_735_033_743_868e-3, max_relative = 1e-14);
        assert_relative_eq!(d.range_r1, 13.985_748_112_682_686, max_relative = 1e-14);
        assert_relative_eq!(d.eps1, -0.5 * d.kappa1 * d.kappa1);
        assert!(d.eps1 < 0.0 && d.eps1_closed < 0.0);
    }

    #[test]
    fn resonance_sentinel_and_no_pole() {
        let d = dimer_energies(&TwoBodyParams::new(10.0, 0.0, 1.2).unwrap()).unwrap();
        assert_eq!(d.eps1, 0.0);
        assert!(d.range_r1.is_infinite());
        assert!(matches!(pwave_pole(0.0), Err(TwoBodyError::NoPole { .. })));
        assert!(matches!(pwave_pole(0.5), Err(TwoBodyError::NoPole { .. })));
    }

    #[test]
    fn r1_bound_enforced() {
        let bound_r0 = 2.0 / EXP_EULER_GAMMA;
        assert!(TwoBodyParams::new(10.0, 0.0, bound_r0 * 0.99).is_err());
        assert!(TwoBodyParams::new(10.0, 0.0, bound_r0 * 1.01).is_ok());
        assert!(TwoBodyParams::new(-1.0, 0.0, 1.2).is_err());
        assert!(TwoBodyParams::new(1.0, -0.1, 1.2).is_err());
    }
}
