//! Atom-molecule observables: 2D cross-section, atom-molecule scattering
//! length and the positions of the three-body resonances in `a1`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use thiserror::Error;

use crate::specfun::EXP_EULER_GAMMA;
use crate::twobody::{range_r1, TwoBodyError};
use crate::wkb::{count_bound_states, WkbError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatteringError {
    #[error("{name} = {value} outside domain")]
    Domain { name: &'static str, value: f64 },
    #[error("at a resonance: N_b = {n_b}, |cot(pi N_b)| = {cot}")]
    ResonancePole { n_b: f64, cot: f64 },
    #[error(transparent)]
    TwoBody(#[from] TwoBodyError),
    #[error(transparent)]
    Wkb(#[from] WkbError),
}

/// `|cot(π N_b)|` below this counts as a pole of `A0`.
pub const POLE_COT_THRESHOLD: f64 = 1e-10;

/// Heuristic upper limit on `k R1` for the scattering-length approximation.
pub const K_R1_VALIDITY: f64 = 0.1;

/// `σ0 = (π²/k) / (π²/4 + ln²(k A0 e^γ / 2))`.
pub fn cross_section(k: f64, a0: f64) -> Result<f64, ScatteringError> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(ScatteringError::Domain { name: "k", value: k });
    }
    if !(a0 > 0.0) || !a0.is_finite() {
        return Err(ScatteringError::Domain { name: "A0", value: a0 });
    }
    let log_term = (0.5 * k * a0 * EXP_EULER_GAMMA).ln();
    Ok(PI * PI / k / (0.25 * PI * PI + log_term * log_term))
}

/// Wave number where `k σ0` peaks.
pub fn peak_wave_number(a0: f64) -> f64 {
    2.0 / (EXP_EULER_GAMMA * a0)
}

/// Whether `k R1` is inside the heuristic validity window.
pub fn within_validity(k: f64, r1: f64) -> bool {
    k * r1 < K_R1_VALIDITY
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomMoleculeLength {
    pub a0: f64,
    pub n_b: f64,
    pub range_r1: f64,
}

/// `A0 = R1 exp(-(π N_b tan(π N_b)) / (2 ν0))`.
pub fn atom_molecule_a0(a1: f64, nu0: f64) -> Result<AtomMoleculeLength, ScatteringError> {
    let n_b = count_bound_states(a1, nu0)?;
    let r1 = range_r1(a1)?;
    let (s, c) = (PI * n_b).sin_cos();
    let cot = c / s;
    if cot.abs() < POLE_COT_THRESHOLD {
        return Err(ScatteringError::ResonancePole { n_b, cot: cot.abs() });
    }
    let a0 = r1 * (-(PI * n_b * s / c) / (2.0 * nu0)).exp();
    Ok(AtomMoleculeLength { a0, n_b, range_r1: r1 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceRow {
    pub n: u32,
    /// `2 exp(π²(n+½)²/(2ν0))`.
    pub a1_n: f64,
    /// `exp(π²n²/(2ν0))`.
    pub a1_n_asymptotic: f64,
    /// `A0` halfway (in `ln a1`) to the next resonance.
    pub a0_midpoint: Option<f64>,
    pub n_b_at: f64,
    /// Set when `a1_n` overflowed and was clamped to `f64::MAX`.
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceTable {
    pub nu0: f64,
    pub rows: Vec<ResonanceRow>,
}

impl ResonanceTable {
    pub fn any_capped(&self) -> bool {
        self.rows.iter().any(|r| r.capped)
    }
}

/// `ln a1` at the `n`-th resonance.
pub fn ln_a1_resonance(n: u32, nu0: f64) -> f64 {
    let h = n as f64 + 0.5;
    std::f64::consts::LN_2 + PI * PI * h * h / (2.0 * nu0)
}

const LN_MAX: f64 = 709.782_712_893_384;

fn exp_capped(ln: f64) -> (f64, bool) {
    if ln >= LN_MAX {
        (f64::MAX, true)
    } else {
        (ln.exp(), false)
    }
}

/// Resonance positions `a1^(n)` where `N_b = n + ½`.
pub fn resonance_positions(n_range: RangeInclusive<u32>, nu0: f64) -> Result<ResonanceTable, ScatteringError> {
    if !(nu0 > 0.0) || !nu0.is_finite() {
        return Err(ScatteringError::Domain {
            name: "nu0",
            value: nu0,
        });
    }
    if *n_range.start() < 1 || n_range.is_empty() {
        return Err(ScatteringError::Domain {
            name: "n",
            value: *n_range.start() as f64,
        });
    }
    let mut rows = Vec::new();
    for n in n_range {
        let ln_a1 = ln_a1_resonance(n, nu0);
        let (a1_n, capped) = exp_capped(ln_a1);
        let nf = n as f64;
        let (a1_n_asymptotic, _) = exp_capped(PI * PI * nf * nf / (2.0 * nu0));
        let n_b_at = (2.0 * nu0 * (ln_a1 - std::f64::consts::LN_2)).sqrt() / PI;
        let ln_mid = 0.5 * (ln_a1 + ln_a1_resonance(n + 1, nu0));
        let a0_midpoint = if ln_mid < LN_MAX {
            atom_molecule_a0(ln_mid.exp(), nu0)
                .ok()
                .map(|r| r.a0)
                .filter(|a| a.is_finite())
        } else {
            None
        };
        rows.push(ResonanceRow {
            n,
            a1_n,
            a1_n_asymptotic,
            a0_midpoint,
            n_b_at,
            capped,
        });
    }
    Ok(ResonanceTable { nu0, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cross_section_at_log_zero() {
        let a0 = 7.0;
        let k = peak_wave_number(a0);
        assert_relative_eq!(cross_section(k, a0).unwrap(), 4.0 / k, max_relative = 1e-14);
    }

    #[test]
    fn cross_section_rejects_bad_input() {
        assert!(cross_section(0.0, 1.0).is_err());
        assert!(cross_section(1.0, -1.0).is_err());
        assert!(cross_section(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn a0_equals_r1_at_integer_count() {
        let nu0 = 20.0;
        // N_b = 3 exactly.
        let a1 = 2.0 * (9.0 * PI * PI / (2.0 * nu0)).exp();
        let r = atom_molecule_a0(a1, nu0).unwrap();
        assert_relative_eq!(r.n_b, 3.0, max_relative = 1e-13);
        assert_relative_eq!(r.a0, r.range_r1, max_relative = 1e-12);
    }

    #[test]
    fn a0_pole_is_flagged() {
        let nu0 = 20.0;
        let a1 = ln_a1_resonance(2, nu0).exp();
        match atom_molecule_a0(a1, nu0) {
            Err(ScatteringError::ResonancePole { n_b, .. }) => assert!((n_b - 2.5).abs() < 1e-12),
            Ok(r) => panic!("no pole flagged, A0 = {}", r.a0),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn a0_diverges_on_both_sides_of_resonance() {
        let nu0 = 20.0;
        let ln_res = ln_a1_resonance(2, nu0);
        let below = atom_molecule_a0((ln_res - 1e-6).exp(), nu0).unwrap().a0;
        let above = atom_molecule_a0((ln_res + 1e-6).exp(), nu0).unwrap().a0;
        let r1 = range_r1(ln_res.exp()).unwrap();
        // tan(πN_b) → +∞ from below, so A0 collapses there and blows up above.
        assert!(above / r1 > 1e50);
        assert!(below / r1 < 1e-50);
    }

    #[test]
    fn resonances_round_trip_and_spacing() {
        let nu0 = 100.0;
        let t = resonance_positions(1..=12, nu0).unwrap();
        for r in &t.rows {
            assert!(!r.capped);
            assert!((r.n_b_at - (r.n as f64 + 0.5)).abs() < 1e-12);
            let nb = count_bound_states(r.a1_n, nu0).unwrap();
            assert!((nb - (r.n as f64 + 0.5)).abs() < 1e-12);
        }
        for w in t.rows.windows(2) {
            assert!(w[1].a1_n > w[0].a1_n);
            let gap = w[1].a1_n.ln() - w[0].a1_n.ln();
            assert_relative_eq!(gap, PI * PI * (w[0].n as f64 + 1.0) / nu0, max_relative = 1e-12);
        }
    }

    #[test]
    fn asymptotic_ratio_tends_to_one() {
        let nu0 = 10.0;
        let t = resonance_positions(1..=200, nu0).unwrap();
        let ratio = |r: &ResonanceRow| ln_a1_resonance(r.n, nu0) / (PI * PI * (r.n as f64).powi(2) / (2.0 * nu0));
        let first = ratio(&t.rows[0]);
        let late = ratio(&t.rows[30]);
        assert!((late - 1.0).abs() < (first - 1.0).abs());
        assert!((late - 1.0).abs() < 0.05);
    }

    #[test]
    fn overflow_is_capped() {
        let t = resonance_positions(1..=200, 1.0).unwrap();
        assert!(t.any_capped());
        let r = t.rows.last().unwrap();
        assert!(r.capped && r.a1_n == f64::MAX && r.a0_midpoint.is_none());
    }

    #[test]
    fn resonance_range_must_start_at_one() {
        assert!(resonance_positions(0..=3, 10.0).is_err());
    }
}
