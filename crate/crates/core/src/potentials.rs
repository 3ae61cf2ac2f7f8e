//! Born-Oppenheimer effective potentials from the light-particle binding.
//!
//! s-wave routines take `R/a0` and return `ξ = e^γ κ a0 / 2`, so that
//! `V = eps0 ξ²`. p-wave routines work in natural units with `ξ = κ r1`
//! and `V = -ξ²/2`.

use std::fmt;

use thiserror::Error;

use crate::dd::DoubleDouble;
use crate::roots::{self, RootError};
use crate::specfun::{bessel_k, k012, EULER_GAMMA, EXP_EULER_GAMMA};
use crate::twobody::{self, TwoBodyError, TwoBodyParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("no real root: {0}")]
    NoRealRoot(String),
    #[error("{name} = {value} outside domain")]
    Domain { name: &'static str, value: f64 },
    #[error("T-matrix pole at xi = {xi}")]
    TMatrixPole { xi: f64 },
    #[error(transparent)]
    TwoBody(#[from] TwoBodyError),
    #[error("root refinement failed: {0}")]
    Root(#[from] RootError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    SWavePlus,
    SWaveMinus,
    PWaveIPlus,
    PWaveIMinus,
    PWaveIZero,
    PWaveIIPlus,
    PWaveIIMinus,
    PWaveIIZero,
    AsymptoticUnified,
}

impl Branch {
    pub const ALL: [Branch; 9] = [
        Branch::SWavePlus,
        Branch::SWaveMinus,
        Branch::PWaveIPlus,
        Branch::PWaveIMinus,
        Branch::PWaveIZero,
        Branch::PWaveIIPlus,
        Branch::PWaveIIMinus,
        Branch::PWaveIIZero,
        Branch::AsymptoticUnified,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Branch::SWavePlus => "s+",
            Branch::SWaveMinus => "s-",
            Branch::PWaveIPlus => "I+",
            Branch::PWaveIMinus => "I-",
            Branch::PWaveIZero => "I0",
            Branch::PWaveIIPlus => "II+",
            Branch::PWaveIIMinus => "II-",
            Branch::PWaveIIZero => "II0",
            Branch::AsymptoticUnified => "unified",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Branch> {
        Branch::ALL
            .into_iter()
            .find(|b| b.tag().eq_ignore_ascii_case(tag.trim()))
    }

    /// Branches whose definition fixes `a1_inv = 0`.
    pub fn is_resonant(self) -> bool {
        matches!(
            self,
            Branch::PWaveIZero | Branch::PWaveIIZero | Branch::AsymptoticUnified
        )
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootResult {
    pub xi: f64,
    /// Low-order part of the root: the refined root is `xi + xi_lo`.
    pub xi_lo: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub converged: bool,
    /// Further roots found by the bracket scan, ascending.
    pub other_roots: Vec<f64>,
}

/// Bracket scan settings for the p-wave conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Upper end of the `ξ` scan; excludes the spurious `T_1` pole near `ξ = 1`.
    pub xi_max: f64,
    /// Lower end of the scan in `z = ξR`.
    pub z_min: f64,
    pub points: usize,
    pub residual_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            xi_max: 0.5,
            z_min: 1e-6,
            points: 200,
            residual_tol: 1e-10,
        }
    }
}

// ---------------------------------------------------------------- s-wave

fn swave_scale(r_over_a0: f64) -> f64 {
    2.0 * r_over_a0 / EXP_EULER_GAMMA
}

fn swave_condition(w: f64, sign: Sign, xi: f64) -> f64 {
    bessel_k(0, w * xi).unwrap_or(0.0) - sign.value() * xi.ln()
}

/// Root of `K0(2 R ξ / (e^γ a0)) = ±ln ξ`.
pub fn solve_swave(r_over_a0: f64, sign: Sign) -> Result<RootResult, PotentialError> {
    if !(r_over_a0 > 0.0) || !r_over_a0.is_finite() {
        return Err(PotentialError::Domain {
            name: "R/a0",
            value: r_over_a0,
        });
    }
    let w = swave_scale(r_over_a0);
    let g = |xi: f64| swave_condition(w, sign, xi);
    let (lo, hi) = match sign {
        Sign::Plus => {
            // g(1) = K0(w) > 0 and g decreases without bound.
            let mut hi = 2.0;
            while g(hi) > 0.0 {
                hi *= 2.0;
                if hi > 1e300 {
                    return Err(PotentialError::NoRealRoot("s+ bracket overflow".into()));
                }
            }
            (0.5 * hi, hi)
        }
        Sign::Minus => {
            // g increases from -ln(R/a0) at 0 to K0(w) > 0 at 1.
            if r_over_a0 <= 1.0 {
                return Err(PotentialError::NoRealRoot(format!(
                    "s- root is complex for R/a0 = {r_over_a0} <= 1"
                )));
            }
            let mut lo = 0.5;
            while g(lo) >= 0.0 {
                lo *= 0.5;
                if lo < 1e-300 {
                    return Err(PotentialError::NoRealRoot(format!(
                        "s- root below 1e-300 at R/a0 = {r_over_a0}"
                    )));
                }
            }
            (lo, 2.0 * lo)
        }
    };
    let root = roots::brent(g, lo, hi, 0.0)?;
    Ok(RootResult {
        xi: root.x,
        xi_lo: 0.0,
        residual: root.fx,
        bracket: root.bracket,
        converged: root.fx.abs() <= ScanOptions::default().residual_tol,
        other_roots: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Small,
    Large,
}

/// Closed-form `V/|eps0|` for the s-wave potentials.
pub fn swave_asymptote(r_over_a0: f64, sign: Sign, regime: Regime) -> Result<f64, PotentialError> {
    if !(r_over_a0 > 0.0) {
        return Err(PotentialError::Domain {
            name: "R/a0",
            value: r_over_a0,
        });
    }
    let x = r_over_a0;
    Ok(match (regime, sign) {
        (Regime::Small, Sign::Plus) => -1.0 / x,
        (Regime::Small, Sign::Minus) => {
            if x < 1.0 {
                return Err(PotentialError::Domain {
                    name: "R/a0 (s- small form)",
                    value: x,
                });
            }
            -(2.0 * EULER_GAMMA).exp() * x.ln() / (x * x)
        }
        (Regime::Large, s) => {
            let tail = (std::f64::consts::PI * EXP_EULER_GAMMA / x).sqrt() * (-swave_scale(x)).exp();
            -1.0 - s.value() * tail
        }
    })
}

// ---------------------------------------------------------------- p-wave

fn pwave_v(a1_inv: f64, xi: f64) -> f64 {
    a1_inv / (xi * xi) + xi.ln()
}

fn pwave_u(a0: f64, xi: f64) -> f64 {
    (xi * EXP_EULER_GAMMA * a0 / 2.0).ln()
}

/// `v` in double-double; keeps full relative accuracy near the `T_1` pole.
fn pwave_v_dd(a1_inv: f64, xi: DoubleDouble) -> f64 {
    (DoubleDouble::from_f64(a1_inv).div(xi * xi) + xi.ln()).to_f64()
}

/// `u` in double-double; keeps full relative accuracy near the `T_0` pole.
fn pwave_u_dd(a0: f64, xi: DoubleDouble) -> f64 {
    (xi * DoubleDouble::EXP_EULER_GAMMA.mul_f64(0.5 * a0)).ln().to_f64()
}

/// `K_0, K_1, K_2` at `z.hi + z.lo` to first order in `z.lo`.
fn k012_split(z: DoubleDouble) -> [f64; 3] {
    let (x, d) = (z.hi(), z.lo());
    let [k0, k1, k2] = k012(x);
    [k0 - k1 * d, k1 - (k0 + k1 / x) * d, k2 - (k1 + 2.0 * k2 / x) * d]
}

/// Transcendental p-wave condition in `z = ξR`.
#[derive(Debug, Clone, Copy)]
enum Condition {
    /// `K0 - K2 - s v`
    I { a1_inv: f64, sign: Sign },
    /// `(K2 + K0 + s v)(K0 - s u) - 2 K1²`
    II { a1_inv: f64, a0: f64, sign: Sign },
}

impl Condition {
    fn eval(self, z: f64, r: f64) -> f64 {
        let k = k012(z);
        let xi = z / r;
        match self {
            Condition::I { a1_inv, sign } => k[0] - k[2] - sign.value() * pwave_v(a1_inv, xi),
            Condition::II { a1_inv, a0, sign } => {
                let s = sign.value();
                (k[2] + k[0] + s * pwave_v(a1_inv, xi)) * (k[0] - s * pwave_u(a0, xi)) - 2.0 * k[1] * k[1]
            }
        }
    }

    fn eval_dd(self, z: DoubleDouble, r: f64) -> f64 {
        let k = k012_split(z);
        let xi = z.div_f64(r);
        match self {
            Condition::I { a1_inv, sign } => k[0] - k[2] - sign.value() * pwave_v_dd(a1_inv, xi),
            Condition::II { a1_inv, a0, sign } => {
                let s = sign.value();
                (k[2] + k[0] + s * pwave_v_dd(a1_inv, xi)) * (k[0] - s * pwave_u_dd(a0, xi)) - 2.0 * k[1] * k[1]
            }
        }
    }

    /// Derivative with respect to `z`.
    fn slope(self, z: f64, r: f64) -> f64 {
        let [k0, k1, k2] = k012(z);
        let (dk0, dk1, dk2) = (-k1, -k0 - k1 / z, -k1 - 2.0 * k2 / z);
        let xi = z / r;
        let dv = |a1_inv: f64| (-2.0 * a1_inv / (xi * xi * xi) + 1.0 / xi) / r;
        match self {
            Condition::I { a1_inv, sign } => dk0 - dk2 - sign.value() * dv(a1_inv),
            Condition::II { a1_inv, a0, sign } => {
                let s = sign.value();
                let a = k2 + k0 + s * pwave_v(a1_inv, xi);
                let b = k0 - s * pwave_u(a0, xi);
                let da = dk2 + dk0 + s * dv(a1_inv);
                let db = dk0 - s / (xi * r);
                da * b + a * db - 4.0 * k1 * dk1
            }
        }
    }

    /// Newton steps in double-double from a bracketed f64 root.
    fn refine(self, z: f64, r: f64) -> (DoubleDouble, f64) {
        let mut best = DoubleDouble::from_f64(z);
        let mut best_f = self.eval_dd(best, r);
        for _ in 0..4 {
            if best_f == 0.0 {
                break;
            }
            let slope = self.slope(best.hi(), r);
            let step = -best_f / slope;
            if !step.is_finite() || step.abs() > 1e-8 * z {
                break;
            }
            let next = best + DoubleDouble::from_f64(step);
            let f = self.eval_dd(next, r);
            if !(f.abs() < best_f.abs()) {
                break;
            }
            best = next;
            best_f = f;
        }
        (best, best_f)
    }
}

fn smallest_root(cond: Condition, r: f64, opts: &ScanOptions, label: &str) -> Result<RootResult, PotentialError> {
    let z_max = opts.xi_max * r;
    if !(z_max > opts.z_min) {
        return Err(PotentialError::Domain { name: "R", value: r });
    }
    let f = |z: f64| cond.eval(z, r);
    let grid = roots::log_grid(opts.z_min, z_max, opts.points);
    let brackets = roots::scan_sign_changes(f, &grid);
    if brackets.is_empty() {
        return Err(PotentialError::NoRealRoot(format!(
            "{label}: no sign change for xi in [{:e}, {:e}] at R = {r}",
            opts.z_min / r,
            opts.xi_max
        )));
    }
    let mut found = Vec::with_capacity(brackets.len());
    for (a, b) in brackets {
        found.push(roots::brent(f, a, b, 0.0)?);
    }
    if found.len() > 1 {
        log::warn!("{label}: {} roots at R = {r}; keeping the smallest xi", found.len());
    }
    let first = found[0];
    let (z, residual) = cond.refine(first.x, r);
    let xi = z.div_f64(r);
    Ok(RootResult {
        xi: xi.hi(),
        xi_lo: xi.lo(),
        residual,
        bracket: (first.bracket.0 / r, first.bracket.1 / r),
        converged: residual.abs() <= opts.residual_tol,
        other_roots: found[1..].iter().map(|root| root.x / r).collect(),
    })
}

fn check_r(r: f64) -> Result<(), PotentialError> {
    if r > 1.0 && r.is_finite() {
        Ok(())
    } else {
        Err(PotentialError::Domain { name: "R", value: r })
    }
}

/// Root of `K0(ξR) - K2(ξR) = ±(a1_inv/ξ² + ln ξ)`.
pub fn solve_pwave_i(
    r: f64,
    params: &TwoBodyParams,
    sign: Sign,
    opts: &ScanOptions,
) -> Result<RootResult, PotentialError> {
    check_r(r)?;
    smallest_root(
        Condition::I {
            a1_inv: params.a1_inv,
            sign,
        },
        r,
        opts,
        "branch I",
    )
}

/// Root of `[K2 + K0 ± v][K0 ∓ u] = 2 K1²` with `v = a1_inv/ξ² + ln ξ`,
/// `u = ln(ξ e^γ a0 / 2)` and Bessel arguments `ξR`.
pub fn solve_pwave_ii(
    r: f64,
    params: &TwoBodyParams,
    sign: Sign,
    opts: &ScanOptions,
) -> Result<RootResult, PotentialError> {
    check_r(r)?;
    smallest_root(
        Condition::II {
            a1_inv: params.a1_inv,
            a0: params.a0,
            sign,
        },
        r,
        opts,
        "branch II",
    )
}

/// Large-`R` resonant branch-I root.
pub fn xi_i0_closed(r: f64) -> Result<f64, PotentialError> {
    let l = r.ln() - EULER_GAMMA + 0.5;
    if !(l > 0.0) {
        return Err(PotentialError::Domain { name: "R", value: r });
    }
    let denom = l + l.ln();
    if !(denom > 0.0) {
        return Err(PotentialError::Domain { name: "R", value: r });
    }
    Ok((2.0 / denom).sqrt() / r)
}

/// Large-`R` resonant branch-II root.
pub fn xi_ii0_closed(r: f64) -> Result<f64, PotentialError> {
    let denom = (0.5 * r).ln() + EULER_GAMMA + 1.5;
    if !(r > 1.0) || !(denom > 0.0) {
        return Err(PotentialError::Domain { name: "R", value: r });
    }
    Ok((2.0 / denom).sqrt() / r)
}

/// `V = -1 / (R² ln R)`.
pub fn v_unified(r: f64) -> Result<f64, PotentialError> {
    if !(r > 1.0) {
        return Err(PotentialError::Domain { name: "R", value: r });
    }
    Ok(-1.0 / (r * r * r.ln()))
}

/// p-wave potential from a root, natural units.
pub fn pwave_energy(xi: f64) -> f64 {
    -0.5 * xi * xi
}

// ---------------------------------------------------------- determinants

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetBlock {
    /// Pure p-wave block; singular on either sign of the branch-I condition.
    M0,
    /// Mixed s/p block for the upper sign of the branch-II condition.
    MPlus,
    /// Mixed s/p block for the lower sign.
    MMinus,
}

impl DetBlock {
    pub fn for_branch(branch: Branch) -> Option<DetBlock> {
        match branch {
            Branch::PWaveIPlus | Branch::PWaveIMinus | Branch::PWaveIZero => Some(DetBlock::M0),
            Branch::PWaveIIPlus | Branch::PWaveIIZero => Some(DetBlock::MPlus),
            Branch::PWaveIIMinus => Some(DetBlock::MMinus),
            _ => None,
        }
    }
}

/// Determinant of a coefficient block built from the T-matrix elements.
///
/// `α0 = 2T0K0`, `α1 = -2i T0K1`, `β0 = 2T1K0`, `β1 = -2i T1K1`,
/// `β2 = -2T1K2`, all Bessel functions at `κR`.
pub fn determinant_residual(xi: f64, r: f64, params: &TwoBodyParams, block: DetBlock) -> Result<f64, PotentialError> {
    determinant_residual_split(xi, 0.0, r, params, block)
}

/// [`determinant_residual`] at `ξ = xi + xi_lo`, as produced by the p-wave solvers.
///
/// `T0 = -1/(2u)` and `T1 = -1/(2v)` are evaluated in double-double so the
/// determinant stays accurate when a root sits close to a two-body pole.
pub fn determinant_residual_split(
    xi: f64,
    xi_lo: f64,
    r: f64,
    params: &TwoBodyParams,
    block: DetBlock,
) -> Result<f64, PotentialError> {
    if !(xi > 0.0) || !xi_lo.is_finite() {
        return Err(PotentialError::Domain { name: "xi", value: xi });
    }
    if !(r > 0.0) {
        return Err(PotentialError::Domain { name: "R", value: r });
    }
    params.validate()?;
    let xi_dd = DoubleDouble::new(xi, xi_lo);
    let u = pwave_u_dd(params.a0, xi_dd);
    let v = pwave_v_dd(params.a1_inv, xi_dd);
    let pole = twobody::POLE_THRESHOLD * std::f64::consts::FRAC_PI_2;
    if u.abs() < pole || v.abs() < pole {
        return Err(PotentialError::TMatrixPole { xi });
    }
    let (t0, t1) = (-0.5 / u, -0.5 / v);
    let k = k012_split(DoubleDouble::product(xi_dd.hi(), r) + DoubleDouble::from_f64(xi_dd.lo() * r));
    let alpha0 = 2.0 * t0 * k[0];
    let beta0 = 2.0 * t1 * k[0];
    let beta2 = -2.0 * t1 * k[2];
    // α1 β1 = (-2i)² T0 T1 K1²
    let alpha1_beta1 = -4.0 * t0 * t1 * k[1] * k[1];
    Ok(match block {
        DetBlock::M0 => 1.0 - (beta0 + beta2).powi(2),
        DetBlock::MPlus => (1.0 + alpha0) * (1.0 + beta2 - beta0) - 2.0 * alpha1_beta1,
        DetBlock::MMinus => (1.0 - alpha0) * (1.0 - (beta2 - beta0)) - 2.0 * alpha1_beta1,
    })
}

impl RootResult {
    /// Block determinant at this root.
    pub fn determinant(&self, r: f64, params: &TwoBodyParams, block: DetBlock) -> Result<f64, PotentialError> {
        determinant_residual_split(self.xi, self.xi_lo, r, params, block)
    }
}

// ---------------------------------------------------------- wavefunction

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveBranch {
    I,
    II,
}

/// Points closer than this to either center are masked.
pub const CENTER_MASK: f64 = 1e-6;

/// Unnormalized light-particle wavefunction with centers at `(∓R/2, 0)`.
///
/// Returns `None` for masked points.
pub fn light_wavefunction(
    branch: WaveBranch,
    sign: Sign,
    kappa: f64,
    r: f64,
    params: &TwoBodyParams,
    grid: &[(f64, f64)],
) -> Result<Vec<Option<f64>>, PotentialError> {
    if !(kappa > 0.0) {
        return Err(PotentialError::Domain {
            name: "kappa",
            value: kappa,
        });
    }
    let s = sign.value();
    let a_coef = match branch {
        WaveBranch::I => 0.0,
        WaveBranch::II => {
            let t0 = twobody::t_matrix(0, kappa, params)?.value;
            let k = k012(kappa * r);
            (2.0 * t0 * k[0] + s) / (2.0 * t0 * k[1])
        }
    };
    Ok(grid
        .iter()
        .map(|&(x, y)| {
            let (dxp, dxm) = (x + 0.5 * r, x - 0.5 * r);
            let rp = dxp.hypot(y);
            let rm = dxm.hypot(y);
            if rp < CENTER_MASK || rm < CENTER_MASK {
                return None;
            }
            let kp = k012(kappa * rp);
            let km = k012(kappa * rm);
            Some(match branch {
                WaveBranch::I => (y / rp) * kp[1] + s * (y / rm) * km[1],
                WaveBranch::II => kp[0] + s * km[0] - a_coef * ((dxp / rp) * kp[1] - s * (dxm / rm) * km[1]),
            })
        })
        .collect())
}

// ------------------------------------------------------------- curves

/// Heavy-heavy potential for the radial problem, natural units.
pub trait Potential: Sync {
    fn value(&self, r: f64) -> f64;

    /// `-R² V(R)` at `R = e^x`; the Langer-variable strength.
    fn scaled(&self, x: f64) -> f64 {
        let r = x.exp();
        -r * r * self.value(r)
    }

    /// `Some(c)` when `scaled(x) = c / x` exactly.
    fn inverse_x_strength(&self) -> Option<f64> {
        None
    }
}

/// `-1/(R² ln R)`; its Langer strength is `1/x`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UnifiedPotential;

impl Potential for UnifiedPotential {
    fn value(&self, r: f64) -> f64 {
        -1.0 / (r * r * r.ln())
    }

    fn scaled(&self, x: f64) -> f64 {
        1.0 / x
    }

    fn inverse_x_strength(&self) -> Option<f64> {
        Some(1.0)
    }
}

impl<F> Potential for F
where
    F: Fn(f64) -> f64 + Sync,
{
    fn value(&self, r: f64) -> f64 {
        self(r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    /// Separation in units of r1.
    pub r: f64,
    /// Natural units; `None` when no real root exists.
    pub v: Option<f64>,
    pub converged: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCurve {
    pub branch: Branch,
    pub points: Vec<CurvePoint>,
    pub validity: (f64, f64),
}

impl PotentialCurve {
    pub fn r_grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.r).collect()
    }

    /// Potential values with `NaN` for missing roots.
    pub fn v(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.v.unwrap_or(f64::NAN)).collect()
    }
}

/// Where a branch is physically meaningful, in units of r1.
pub fn validity_window(branch: Branch, params: &TwoBodyParams) -> (f64, f64) {
    match branch {
        Branch::SWavePlus => (0.0, f64::INFINITY),
        Branch::SWaveMinus => (params.a0, f64::INFINITY),
        Branch::PWaveIPlus | Branch::PWaveIMinus | Branch::PWaveIIPlus | Branch::PWaveIIMinus => {
            let upper = twobody::dimer_energies(params)
                .map(|d| d.range_r1)
                .unwrap_or(f64::INFINITY);
            (1.0, upper)
        }
        Branch::PWaveIZero | Branch::PWaveIIZero => (1.0, f64::INFINITY),
        Branch::AsymptoticUnified => (std::f64::consts::E, f64::INFINITY),
    }
}

/// Root and energy of one branch at separation `r` (units of r1).
pub fn evaluate_branch(branch: Branch, params: &TwoBodyParams, r: f64, opts: &ScanOptions) -> CurvePoint {
    let resonant = TwoBodyParams { a1_inv: 0.0, ..*params };
    let solved = match branch {
        Branch::SWavePlus | Branch::SWaveMinus => {
            let sign = if branch == Branch::SWavePlus {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let eps0 = -2.0 * (-2.0 * EULER_GAMMA).exp() / (params.a0 * params.a0);
            solve_swave(r / params.a0, sign).map(|root| (eps0 * root.xi * root.xi, root))
        }
        Branch::PWaveIPlus => solve_pwave_i(r, params, Sign::Plus, opts).map(with_pwave_energy),
        Branch::PWaveIMinus => solve_pwave_i(r, params, Sign::Minus, opts).map(with_pwave_energy),
        Branch::PWaveIZero => solve_pwave_i(r, &resonant, Sign::Plus, opts).map(with_pwave_energy),
        Branch::PWaveIIPlus => solve_pwave_ii(r, params, Sign::Plus, opts).map(with_pwave_energy),
        Branch::PWaveIIMinus => solve_pwave_ii(r, params, Sign::Minus, opts).map(with_pwave_energy),
        Branch::PWaveIIZero => solve_pwave_ii(r, &resonant, Sign::Plus, opts).map(with_pwave_energy),
        Branch::AsymptoticUnified => {
            return match v_unified(r) {
                Ok(v) => CurvePoint {
                    r,
                    v: Some(v),
                    converged: true,
                    residual: 0.0,
                },
                Err(_) => CurvePoint {
                    r,
                    v: None,
                    converged: false,
                    residual: f64::NAN,
                },
            }
        }
    };
    match solved {
        Ok((v, root)) => CurvePoint {
            r,
            v: Some(v),
            converged: root.converged,
            residual: root.residual,
        },
        Err(err) => {
            log::debug!("{branch} at R = {r}: {err}");
            CurvePoint {
                r,
                v: None,
                converged: false,
                residual: f64::NAN,
            }
        }
    }
}

fn with_pwave_energy(root: RootResult) -> (f64, RootResult) {
    (pwave_energy(root.xi), root)
}

/// A branch sampled on `grid`, in grid order.
pub fn potential_curve(branch: Branch, params: &TwoBodyParams, grid: &[f64], opts: &ScanOptions) -> PotentialCurve {
    PotentialCurve {
        branch,
        points: grid.iter().map(|&r| evaluate_branch(branch, params, r, opts)).collect(),
        validity: validity_window(branch, params),
    }
}
