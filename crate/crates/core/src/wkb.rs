//! Semiclassical treatment of the heavy-heavy radial problem.
//!
//! Phases are evaluated in the Langer variable `x = ln R`, where the radial
//! equation reads `χ'' + ν0 [E e^{2x} + s(x)] χ = 0` with
//! `s(x) = -e^{2x} V(e^x)` (see [`Potential::scaled`]). Turning points are
//! carried as `x_t` so that deep-threshold energies never underflow.

use std::f64::consts::PI;

use thiserror::Error;

use crate::potentials::Potential;
use crate::quad::{adaptive_simpson, QuadError};
use crate::roots::{self, RootError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WkbError {
    #[error("{name} = {value} outside domain")]
    Domain { name: &'static str, value: f64 },
    #[error("no turning point for E = {energy}")]
    NoTurningPoint { energy: f64 },
    #[error("turning point beyond R_max = {r_max:e}")]
    BeyondRMax { r_max: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("fewer than two levels available for the fit")]
    TooFewLevels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    /// Energy neglected under the square root; inverts in closed form.
    ClosedForm,
    /// Full phase integral including the energy.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbConfig {
    pub theta: f64,
    pub r_inner: f64,
    pub quad_tol: f64,
    pub r_max: f64,
    pub mode: PhaseMode,
}

impl Default for WkbConfig {
    fn default() -> Self {
        Self {
            theta: 0.0,
            r_inner: 1.0,
            quad_tol: 1e-10,
            r_max: 1e300,
            mode: PhaseMode::ClosedForm,
        }
    }
}

impl WkbConfig {
    pub fn validate(&self) -> Result<(), WkbError> {
        if !(self.theta.abs() <= PI) {
            return Err(WkbError::Domain {
                name: "theta",
                value: self.theta,
            });
        }
        if !(self.r_inner >= 1.0) || !self.r_inner.is_finite() {
            return Err(WkbError::Domain {
                name: "R_inner",
                value: self.r_inner,
            });
        }
        if !(self.quad_tol > 0.0) {
            return Err(WkbError::Domain {
                name: "quad_tol",
                value: self.quad_tol,
            });
        }
        if !(self.r_max > self.r_inner) {
            return Err(WkbError::Domain {
                name: "R_max",
                value: self.r_max,
            });
        }
        Ok(())
    }

    fn x_inner(&self) -> f64 {
        self.r_inner.ln()
    }

    fn x_max(&self) -> f64 {
        self.r_max.ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: u32,
    pub rho_n: f64,
    /// `ln rho_n`, finite even when `rho_n` overflows.
    pub ln_rho_n: f64,
    pub e_n: f64,
    /// `ln|E_n|`, finite even when `E_n` underflows.
    pub ln_abs_e_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub levels: Vec<Level>,
    pub theta_used: f64,
    pub e0_fit: f64,
    /// Least-squares slope of `ln(n²|E_n|)` against `n²`.
    pub slope: f64,
    pub slope_theory: f64,
    pub rejected: Vec<u32>,
}

impl SpectrumResult {
    pub fn slope_rel_err(&self) -> f64 {
        (self.slope / self.slope_theory - 1.0).abs()
    }
}

/// `E = -s(x) e^{-2x}` for a turning point at `x`.
pub fn energy_at_turning_x<P: Potential + ?Sized>(potential: &P, x: f64) -> f64 {
    -potential.scaled(x) * (-2.0 * x).exp()
}

/// Turning point `x_t = ln R_E` with `V(R_E) = E`, by bisection on
/// `ln s(x) - 2x = ln(-E)`.
pub fn turning_point_x<P: Potential + ?Sized>(energy: f64, potential: &P, cfg: &WkbConfig) -> Result<f64, WkbError> {
    if !(energy < 0.0) {
        return Err(WkbError::NoTurningPoint { energy });
    }
    let target = (-energy).ln();
    let g = |x: f64| {
        let s = potential.scaled(x);
        if s > 0.0 {
            s.ln() - 2.0 * x - target
        } else {
            f64::NEG_INFINITY
        }
    };
    let (lo, hi) = (cfg.x_inner(), cfg.x_max());
    // Unified-type potentials are singular at x = 0; start just inside.
    let lo_eval = if lo == 0.0 { f64::MIN_POSITIVE } else { lo };
    let g_lo = g(lo_eval);
    if g_lo < 0.0 {
        return Err(WkbError::NoTurningPoint { energy });
    }
    if g(hi) > 0.0 {
        return Err(WkbError::BeyondRMax { r_max: cfg.r_max });
    }
    let grid = roots::linear_grid(lo_eval, hi, 400);
    let bracket = roots::scan_sign_changes(g, &grid)
        .into_iter()
        .next()
        .ok_or(WkbError::NoTurningPoint { energy })?;
    let xtol = cfg.quad_tol.min(1e-12) * bracket.1.abs().max(1.0);
    Ok(roots::bisect(g, bracket.0, bracket.1, xtol)?.x)
}

/// Outer turning point `R_E`.
pub fn turning_point<P: Potential + ?Sized>(energy: f64, potential: &P, cfg: &WkbConfig) -> Result<f64, WkbError> {
    turning_point_x(energy, potential, cfg).map(f64::exp)
}

fn inner_scaled<P: Potential + ?Sized>(potential: &P, x: f64, s: f64) -> Result<f64, WkbError> {
    // s² · scaled(x + s²), finite at the x = 0 singularity of 1/x-type strengths.
    if x == 0.0 && s == 0.0 {
        return potential
            .inverse_x_strength()
            .ok_or(WkbError::Domain { name: "x", value: 0.0 });
    }
    Ok(s * s * potential.scaled(x + s * s))
}

/// `∫_x^{x_t} sqrt(ν0 [s(x') - s(x_t) e^{2(x'-x_t)}]) dx'`, without θ.
pub fn langer_phase<P: Potential + ?Sized>(
    x: f64,
    x_t: f64,
    nu0: f64,
    potential: &P,
    quad_tol: f64,
) -> Result<f64, WkbError> {
    if !(x >= 0.0) || !(x_t >= x) {
        return Err(WkbError::Domain { name: "x", value: x });
    }
    if x_t == x {
        return Ok(0.0);
    }
    let s_t = potential.scaled(x_t);
    let radicand = |xp: f64, s2_scaled: f64, s2: f64| {
        // s2 · [s(x') - s(x_t) e^{2(x'-x_t)}]
        (nu0 * (s2_scaled - s2 * s_t * (2.0 * (xp - x_t)).exp())).max(0.0)
    };
    let mid = 0.5 * (x + x_t);
    // x' = x + s², dx' = 2s ds
    let lower_end = (mid - x).sqrt();
    let lower = adaptive_simpson(
        |s| match inner_scaled(potential, x, s) {
            Ok(s2_scaled) => 2.0 * radicand(x + s * s, s2_scaled, s * s).sqrt(),
            Err(_) => f64::NAN,
        },
        0.0,
        lower_end,
        0.5 * quad_tol,
    )?;
    // x' = x_t - s²
    let upper_end = (x_t - mid).sqrt();
    let upper = adaptive_simpson(
        |s| {
            let xp = x_t - s * s;
            2.0 * s * radicand(xp, potential.scaled(xp), 1.0).sqrt()
        },
        0.0,
        upper_end,
        0.5 * quad_tol,
    )?;
    Ok(lower + upper)
}

/// `∫_x^∞ sqrt(ν0 s(x')) dx'` truncated at `x_cap`; the `E = 0` phase.
pub fn threshold_phase<P: Potential + ?Sized>(
    x: f64,
    x_cap: f64,
    nu0: f64,
    potential: &P,
    quad_tol: f64,
) -> Result<f64, WkbError> {
    if !(x >= 0.0) || !(x_cap >= x) {
        return Err(WkbError::Domain { name: "x", value: x });
    }
    let end = (x_cap - x).sqrt();
    Ok(adaptive_simpson(
        |s| match inner_scaled(potential, x, s) {
            Ok(v) => 2.0 * (nu0 * v).max(0.0).sqrt(),
            Err(_) => f64::NAN,
        },
        0.0,
        end,
        quad_tol,
    )?)
}

/// `φ(R) = ∫_R^{R_E} sqrt(ν0 (E - V)) dR' + θ`. At `E = 0` the upper limit is `R_max`.
pub fn wkb_phase<P: Potential + ?Sized>(
    r: f64,
    energy: f64,
    nu0: f64,
    potential: &P,
    cfg: &WkbConfig,
) -> Result<f64, WkbError> {
    if !(r >= 1.0) {
        return Err(WkbError::Domain { name: "R", value: r });
    }
    if !(energy <= 0.0) {
        return Err(WkbError::Domain {
            name: "E",
            value: energy,
        });
    }
    let x = r.ln();
    if energy == 0.0 {
        return Ok(threshold_phase(x, cfg.x_max(), nu0, potential, cfg.quad_tol)? + cfg.theta);
    }
    let x_t = turning_point_x(energy, potential, cfg)?;
    if x > x_t {
        return Err(WkbError::Domain { name: "R", value: r });
    }
    Ok(langer_phase(x, x_t, nu0, potential, cfg.quad_tol)? + cfg.theta)
}

/// `2 sqrt(ν0) [sqrt(ln R_E) - sqrt(ln R)] + θ`.
pub fn wkb_phase_approx(r: f64, r_e: f64, nu0: f64, theta: f64) -> Result<f64, WkbError> {
    if !(r >= 1.0) || !(r_e >= r) {
        return Err(WkbError::Domain { name: "R", value: r });
    }
    Ok(2.0 * nu0.sqrt() * (r_e.ln().sqrt() - r.ln().sqrt()) + theta)
}

/// Beyond this the `e^{-2ξ}` factor is below 1e-34.
const PHI_XI_CUTOFF: f64 = 40.0;

/// Difference between the energy-free and full phases at turning point `x_eps`.
pub fn phi_correction(x: f64, x_eps: f64, nu0: f64, quad_tol: f64) -> Result<f64, WkbError> {
    if !(x > 0.0) || !(x_eps > x) {
        return Err(WkbError::Domain { name: "x", value: x });
    }
    let prefactor = (nu0 / x_eps).sqrt();
    let upper = (x_eps - x).min(PHI_XI_CUTOFF);
    // ξ = s²; the denominator behaves like sqrt(ξ) near 0.
    let integrand = |s: f64| {
        let xi = s * s;
        let shrink = 1.0 - xi / x_eps;
        let e = (-2.0 * xi).exp();
        // 1 - shrink e^{-2ξ} without cancellation
        let root = (-(-2.0 * xi).exp_m1() * shrink + xi / x_eps).max(0.0).sqrt();
        2.0 * s * shrink.sqrt() * e / (1.0 + root)
    };
    let integral = adaptive_simpson(integrand, 0.0, upper.sqrt(), quad_tol / prefactor)?;
    Ok(prefactor * integral)
}

/// `N_b = (1/π) sqrt(2 ν0 ln(a1/2))`.
pub fn count_bound_states(a1: f64, nu0: f64) -> Result<f64, WkbError> {
    if !(a1 > 2.0) {
        return Err(WkbError::Domain { name: "a1", value: a1 });
    }
    if !(nu0 > 0.0) {
        return Err(WkbError::Domain {
            name: "nu0",
            value: nu0,
        });
    }
    Ok((2.0 * nu0 * (0.5 * a1).ln()).sqrt() / PI)
}

/// `(M/m) / π²`.
pub fn n_max(mass_ratio_big_m_over_m: f64) -> f64 {
    mass_ratio_big_m_over_m / (PI * PI)
}

/// Turning point `x_n` solving `φ(R_inner, e^{x_n}) = πn`.
pub fn quantize_level_x<P: Potential + ?Sized>(
    n: u32,
    nu0: f64,
    cfg: &WkbConfig,
    potential: &P,
) -> Result<f64, WkbError> {
    let x_in = cfg.x_inner();
    let target = PI * n as f64 - cfg.theta;
    if !(target > 0.0) {
        return Err(WkbError::Domain {
            name: "n",
            value: n as f64,
        });
    }
    let closed = {
        let root = target / (2.0 * nu0.sqrt()) + x_in.sqrt();
        root * root
    };
    let x_n = match cfg.mode {
        PhaseMode::ClosedForm => closed,
        PhaseMode::Numeric => {
            let f = |x_t: f64| langer_phase(x_in, x_t, nu0, potential, cfg.quad_tol).map_or(f64::NAN, |p| p - target);
            let mut hi = closed + 1.0;
            let mut fh = f(hi);
            while fh < 0.0 {
                hi = x_in + 2.0 * (hi - x_in);
                if hi > cfg.x_max() {
                    return Err(WkbError::BeyondRMax { r_max: cfg.r_max });
                }
                fh = f(hi);
            }
            let xtol = 1e-13 * hi.max(1.0);
            roots::brent(f, x_in, hi, xtol)?.x
        }
    };
    if x_n > cfg.x_max() {
        return Err(WkbError::BeyondRMax { r_max: cfg.r_max });
    }
    Ok(x_n)
}

/// WKB levels for `n_range` and the least-squares fit of the quasi-Coulomb law.
pub fn quantize_spectrum<P: Potential + ?Sized>(
    n_range: std::ops::RangeInclusive<u32>,
    nu0: f64,
    cfg: &WkbConfig,
    potential: &P,
) -> Result<SpectrumResult, WkbError> {
    cfg.validate()?;
    if !(nu0 > 0.0) {
        return Err(WkbError::Domain {
            name: "nu0",
            value: nu0,
        });
    }
    let mut levels = Vec::new();
    let mut rejected = Vec::new();
    for n in n_range {
        if n == 0 {
            rejected.push(n);
            continue;
        }
        match quantize_level_x(n, nu0, cfg, potential) {
            Ok(x_n) => levels.push(Level {
                n,
                rho_n: x_n.exp(),
                ln_rho_n: x_n,
                e_n: energy_at_turning_x(potential, x_n),
                ln_abs_e_n: potential.scaled(x_n).ln() - 2.0 * x_n,
            }),
            Err(err) => {
                log::warn!("level n = {n} rejected: {err}");
                rejected.push(n);
            }
        }
    }
    let slope_theory = -PI * PI / (2.0 * nu0);
    let (slope, e0_fit) = fit_quasi_coulomb(&levels, slope_theory)?;
    Ok(SpectrumResult {
        levels,
        theta_used: cfg.theta,
        e0_fit,
        slope,
        slope_theory,
        rejected,
    })
}

fn ln_n2_abs_e(level: &Level) -> f64 {
    let n = level.n as f64;
    2.0 * n.ln() + level.ln_abs_e_n
}

/// Returns `(slope, E0)`: the regression slope of `ln(n²|E_n|)` on `n²` and
/// `E0 = exp(mean[ln(n²|E_n|) - slope_theory n²])`.
fn fit_quasi_coulomb(levels: &[Level], slope_theory: f64) -> Result<(f64, f64), WkbError> {
    let usable: Vec<&Level> = levels.iter().filter(|l| l.ln_abs_e_n.is_finite()).collect();
    if usable.len() < 2 {
        return Err(WkbError::TooFewLevels);
    }
    let count = usable.len() as f64;
    let xs: Vec<f64> = usable.iter().map(|l| (l.n as f64).powi(2)).collect();
    let ys: Vec<f64> = usable.iter().map(|l| ln_n2_abs_e(l)).collect();
    let mx = xs.iter().sum::<f64>() / count;
    let my = ys.iter().sum::<f64>() / count;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let ln_e0 = xs.iter().zip(&ys).map(|(x, y)| y - slope_theory * x).sum::<f64>() / count;
    Ok((slope, ln_e0.exp()))
}

/// `exp[-π²(n+½)/ν0] (n/(n+1))²`.
pub fn ratio_law(n: u32, nu0: f64) -> f64 {
    let n = n as f64;
    (-PI * PI * (n + 0.5) / nu0).exp() * (n / (n + 1.0)).powi(2)
}
