//! The acceptance suite behind `planar3b validate`.
//!
//! Every check records its measured value and the bound it is held to. The
//! WKB quadrature checks use the configured `quad_tol`; everything else runs
//! at fixed parameters.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::time::Instant;

use planar3b_core::potentials::{
    solve_pwave_i, solve_pwave_ii, solve_swave, swave_asymptote, v_unified, xi_i0_closed, xi_ii0_closed, Branch,
    DetBlock, PotentialError, Regime, ScanOptions, Sign, UnifiedPotential,
};
use planar3b_core::radial::{bound_states_numerov, count_levels_numerov, numerov_integrate_q, zero_energy_exact};
use planar3b_core::roots::log_grid;
use planar3b_core::scattering::{atom_molecule_a0, ln_a1_resonance, resonance_positions, ScatteringError};
use planar3b_core::specfun::{bessel_j, bessel_k, bessel_y};
use planar3b_core::twobody::{dimer_energies, range_r1, TwoBodyParams};
use planar3b_core::wkb::{
    count_bound_states, langer_phase, phi_correction, quantize_spectrum, ratio_law, PhaseMode, WkbConfig,
};

use crate::commands::{potential_file_name, potentials_tables, spectrum_file_name, spectrum_tables};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::ParsedCsv;

/// Module names accepted by `--only`.
pub const MODULES: [&str; 6] = ["specfun", "potentials", "wkb", "radial_oracle", "scattering", "cli_io"];

const BESSEL_TABLE: &str = include_str!("../../core/data/bessel_reference.csv");

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    /// Closed interval.
    Between(f64, f64),
    /// Value is 1 when the property holds.
    Holds,
}

impl Bound {
    fn admits(self, v: f64) -> bool {
        match self {
            Bound::AtMost(b) => v <= b,
            Bound::AtLeast(b) => v >= b,
            Bound::Between(lo, hi) => (lo..=hi).contains(&v),
            Bound::Holds => v == 1.0,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtMost(b) => write!(f, "<= {b:e}"),
            Bound::AtLeast(b) => write!(f, ">= {b:e}"),
            Bound::Between(lo, hi) => write!(f, "in [{lo}, {hi}]"),
            Bound::Holds => f.write_str("holds"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub criterion: u8,
    pub module: &'static str,
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(criterion: u8, module: &'static str, name: impl Into<String>, value: f64, bound: Bound) -> Self {
        Self {
            criterion,
            module,
            name: name.into(),
            value,
            bound,
            passed: bound.admits(value),
            detail: String::new(),
        }
    }

    pub fn holds(criterion: u8, module: &'static str, name: impl Into<String>, ok: bool) -> Self {
        Self::new(criterion, module, name, if ok { 1.0 } else { 0.0 }, Bound::Holds)
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// A check that could not be evaluated.
    fn error(criterion: u8, module: &'static str, name: impl Into<String>, err: impl fmt::Display) -> Self {
        Self::holds(criterion, module, name, false).detail(format!("error: {err}"))
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let value = match self.bound {
            Bound::Holds => (if self.value == 1.0 { "yes" } else { "no" }).to_owned(),
            _ => format!("{:.4e}", self.value),
        };
        let mut line = format!(
            "{status} [{:>2}] {:<13} {:<48} {:>11} {}",
            self.criterion, self.module, self.name, value, self.bound
        );
        if !self.detail.is_empty() {
            line.push_str("  (");
            line.push_str(&self.detail);
            line.push(')');
        }
        line
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn render(&self) -> String {
        let mut out: String = self.checks.iter().map(|c| c.line() + "\n").collect();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), self.failed()));
        out
    }

    /// Whether every check of `criterion` passed; `None` if it has no checks.
    pub fn criterion_passed(&self, criterion: u8) -> Option<bool> {
        let mut checks = self.checks.iter().filter(|c| c.criterion == criterion).peekable();
        checks.peek()?;
        Some(checks.all(|c| c.passed))
    }
}

/// Runs the suite, optionally restricted to one module.
pub fn run(cfg: &RunConfig, only: Option<&str>) -> Result<Report, CliError> {
    if let Some(m) = only {
        if !MODULES.contains(&m) {
            return Err(CliError::Config(format!(
                "--only {m:?}: expected one of {}",
                MODULES.join(", ")
            )));
        }
    }
    let wants = |m: &str| only.is_none_or(|o| o == m);
    let mut checks = Vec::new();
    if wants("specfun") {
        checks.extend(criterion_1());
    }
    if wants("potentials") {
        checks.extend(criterion_2());
        checks.extend(criterion_3());
        checks.extend(criterion_4());
    }
    if wants("wkb") {
        checks.extend(criterion_5());
        checks.extend(criterion_7(cfg.wkb.quad_tol));
    }
    if wants("radial_oracle") {
        checks.extend(criterion_6(cfg.wkb.quad_tol));
        checks.extend(criterion_8());
    }
    if wants("scattering") {
        checks.extend(criterion_9());
    }
    if wants("cli_io") {
        checks.extend(criterion_10());
    }
    checks.sort_by_key(|c| c.criterion);
    Ok(Report { checks })
}

fn max_rel(pairs: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    pairs
        .into_iter()
        .map(|(got, want)| ((got - want) / want).abs())
        .fold(0.0, f64::max)
}

/// Largest step against the expected direction, relative to the largest magnitude.
fn worst_step(values: &[f64], increasing: bool) -> f64 {
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    values
        .windows(2)
        .map(|w| if increasing { w[0] - w[1] } else { w[1] - w[0] })
        .fold(0.0_f64, f64::max)
        / scale
}

// ------------------------------------------------------------- criterion 1

fn criterion_1() -> Vec<Check> {
    const M: &str = "specfun";
    let start = Instant::now();
    let mut by_fn: BTreeMap<(char, u32), Vec<(f64, f64)>> = BTreeMap::new();
    let mut errors = Vec::new();
    for line in BESSEL_TABLE.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (Some(kind), Ok(order), Ok(x), Ok(want)) = (
            f[0].chars().next(),
            f[1].parse::<u32>(),
            f[2].parse::<f64>(),
            f[3].parse::<f64>(),
        ) else {
            errors.push(format!("bad row {line:?}"));
            continue;
        };
        let got = match kind {
            'K' => bessel_k(order, x),
            'J' => bessel_j(order, x),
            _ => bessel_y(order, x),
        };
        match got {
            Ok(v) => by_fn.entry((kind, order)).or_default().push((v, want)),
            Err(e) => errors.push(format!("{kind}{order}({x}): {e}")),
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let mut checks: Vec<Check> = by_fn
        .iter()
        .map(|((kind, order), pairs)| {
            Check::new(
                1,
                M,
                format!("{kind}{order} max relative error"),
                max_rel(pairs.iter().copied()),
                Bound::AtMost(1e-10),
            )
            .detail(format!("{} points", pairs.len()))
        })
        .collect();
    let all_fifty = by_fn.len() == 7 && by_fn.values().all(|p| p.len() == 50) && errors.is_empty();
    checks.push(Check::holds(1, M, "50 oracle points for each of 7 functions", all_fifty).detail(errors.join("; ")));
    checks.push(Check::new(1, M, "runtime [s]", elapsed, Bound::AtMost(1.0)));
    checks
}

// ------------------------------------------------------------- criterion 2

fn criterion_2() -> Vec<Check> {
    const M: &str = "potentials";
    let mut checks = Vec::new();

    let small = log_grid(1e-4, 0.05, 60);
    let rel = small
        .iter()
        .map(|&x| {
            let xi = solve_swave(x, Sign::Plus)?.xi;
            let v_asym = swave_asymptote(x, Sign::Plus, Regime::Small)?;
            Ok(((xi - (-v_asym).sqrt()) / (-v_asym).sqrt()).abs())
        })
        .collect::<Result<Vec<f64>, PotentialError>>();
    checks.push(match rel {
        Ok(r) => Check::new(
            2,
            M,
            "xi+ vs small-R form, R/a0 in [1e-4, 0.05]",
            r.iter().fold(0.0, |a, b| a.max(*b)),
            Bound::AtMost(0.03),
        ),
        Err(e) => Check::error(2, M, "xi+ vs small-R form", e),
    });

    let large = log_grid(5.0, 1e3, 60);
    for sign in [Sign::Plus, Sign::Minus] {
        let name = format!(
            "xi{} vs large-R form, R/a0 in [5, 1e3]",
            if sign == Sign::Plus { "+" } else { "-" }
        );
        let rel = large
            .iter()
            .map(|&x| {
                let xi = solve_swave(x, sign)?.xi;
                let want = (-swave_asymptote(x, sign, Regime::Large)?).sqrt();
                Ok(((xi - want) / want).abs())
            })
            .collect::<Result<Vec<f64>, PotentialError>>();
        checks.push(match rel {
            Ok(r) => Check::new(2, M, name, r.iter().fold(0.0, |a, b| a.max(*b)), Bound::AtMost(0.03)),
            Err(e) => Check::error(2, M, name, e),
        });
    }

    let below = log_grid(1e-3, 0.999, 80);
    let complex = below
        .iter()
        .all(|&x| matches!(solve_swave(x, Sign::Minus), Err(PotentialError::NoRealRoot(_))));
    checks.push(Check::holds(2, M, "xi- has no real root for R < a0", complex).detail("80 points in [1e-3, 0.999]"));

    // V = eps0 xi^2 with eps0 < 0: repulsive means xi- increases with R.
    let above = log_grid(1.0 + 1e-6, 100.0, 120);
    let pairs: Result<Vec<(f64, f64)>, PotentialError> = above
        .iter()
        .map(|&x| {
            Ok((
                -solve_swave(x, Sign::Minus)?.xi.powi(2),
                -solve_swave(x, Sign::Plus)?.xi.powi(2),
            ))
        })
        .collect();
    match pairs {
        Ok(p) => {
            let v_minus: Vec<f64> = p.iter().map(|q| q.0).collect();
            checks.push(Check::new(
                2,
                M,
                "V- non-increasing for R >= a0 (worst step)",
                worst_step(&v_minus, false),
                Bound::AtMost(0.0),
            ));
            // Both tend to eps0, so far out they agree to rounding.
            checks.push(Check::holds(
                2,
                M,
                "V- >= V+ for R >= a0",
                p.iter().all(|(m, pl)| m >= pl),
            ));
        }
        Err(e) => checks.push(Check::error(2, M, "V- repulsive for R >= a0", e)),
    }

    let start = Instant::now();
    let sweep = log_grid(1e-3, 1e3, 500);
    let solved = sweep
        .iter()
        .flat_map(|&x| [solve_swave(x, Sign::Plus), solve_swave(x, Sign::Minus)])
        .filter(|r| r.is_ok())
        .count();
    checks.push(
        Check::new(
            2,
            M,
            "runtime of a 500-point sweep, both signs [s]",
            start.elapsed().as_secs_f64(),
            Bound::AtMost(5.0),
        )
        .detail(format!("{solved} roots")),
    );
    checks
}

// ------------------------------------------------------------- criterion 3

fn criterion_3() -> Vec<Check> {
    const M: &str = "potentials";
    let resonant = TwoBodyParams::new(10.0, 0.0, 1.2).expect("valid resonant parameters");
    let opts = ScanOptions::default();
    let grid = log_grid(1e3, 1e6, 31);
    let mut checks = Vec::new();
    for (label, closed, solve) in [
        (
            "I",
            xi_i0_closed as fn(f64) -> Result<f64, PotentialError>,
            Branch::PWaveIZero,
        ),
        ("II", xi_ii0_closed, Branch::PWaveIIZero),
    ] {
        let devs: Result<Vec<f64>, PotentialError> = grid
            .iter()
            .map(|&r| {
                let full = match solve {
                    Branch::PWaveIZero => solve_pwave_i(r, &resonant, Sign::Plus, &opts)?,
                    _ => solve_pwave_ii(r, &resonant, Sign::Plus, &opts)?,
                };
                Ok((closed(r)? / full.xi - 1.0).abs())
            })
            .collect();
        match devs {
            Ok(d) => {
                checks.push(Check::new(
                    3,
                    M,
                    format!("xi_{label}0 closed form deviation, R in [1e3, 1e6]"),
                    d.iter().fold(0.0, |a, b| a.max(*b)),
                    Bound::AtMost(0.05),
                ));
                let decreasing = d.windows(2).all(|w| w[1] < w[0]);
                checks.push(
                    Check::holds(3, M, format!("xi_{label}0 deviation decreasing in R"), decreasing).detail(format!(
                        "{:.3e} -> {:.3e}",
                        d[0],
                        d[d.len() - 1]
                    )),
                );
            }
            Err(e) => checks.push(Check::error(3, M, format!("xi_{label}0 closed form"), e)),
        }
    }
    let r = 1e6;
    let merge = (|| -> Result<f64, PotentialError> {
        let vi = -0.5 * solve_pwave_i(r, &resonant, Sign::Plus, &opts)?.xi.powi(2);
        let vii = -0.5 * solve_pwave_ii(r, &resonant, Sign::Plus, &opts)?.xi.powi(2);
        Ok((vi - vii).abs() / v_unified(r)?.abs())
    })();
    checks.push(match merge {
        Ok(m) => Check::new(
            3,
            M,
            "branch merge |V_I0 - V_II0|/|v_unified| at R = 1e6",
            m,
            Bound::AtMost(0.1),
        ),
        Err(e) => Check::error(3, M, "branch merge", e),
    });
    checks
}

// ------------------------------------------------------------- criterion 4

/// The `(R, a0, a1)` sample: a log grid in `R` with golden-ratio offsets in `a0` and `a1`.
pub fn determinant_sample() -> Vec<(f64, f64, f64)> {
    let golden = 0.618_033_988_749_894_9_f64;
    log_grid(1.5, 200.0, 100)
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let u = (i as f64 * golden).fract();
            let v = (i as f64 * golden * golden).fract();
            (r, 2.0 * 25f64.powf(u), 10.0 * 1000f64.powf(v))
        })
        .collect()
}

fn criterion_4() -> Vec<Check> {
    const M: &str = "potentials";
    let opts = ScanOptions::default();
    let (mut checked, mut at_pole, mut worst) = (0usize, 0usize, 0.0_f64);
    let mut errors = Vec::new();
    for (r, a0, a1) in determinant_sample() {
        let params = match TwoBodyParams::with_a1(a0, a1, 1.2) {
            Ok(p) => p,
            Err(e) => {
                errors.push(e.to_string());
                continue;
            }
        };
        for (branch, result) in [
            (Branch::PWaveIPlus, solve_pwave_i(r, &params, Sign::Plus, &opts)),
            (Branch::PWaveIMinus, solve_pwave_i(r, &params, Sign::Minus, &opts)),
            (Branch::PWaveIIPlus, solve_pwave_ii(r, &params, Sign::Plus, &opts)),
            (Branch::PWaveIIMinus, solve_pwave_ii(r, &params, Sign::Minus, &opts)),
        ] {
            let root = match result {
                Ok(root) if root.converged => root,
                _ => continue,
            };
            let block = DetBlock::for_branch(branch).expect("p-wave branch");
            match root.determinant(r, &params, block) {
                Ok(det) => {
                    checked += 1;
                    worst = worst.max(det.abs());
                }
                Err(PotentialError::TMatrixPole { .. }) => at_pole += 1,
                Err(e) => errors.push(format!("{branch} at R = {r}: {e}")),
            }
        }
    }
    vec![
        Check::new(
            4,
            M,
            "max |det| at converged roots, 100-point sample",
            worst,
            Bound::AtMost(1e-8),
        )
        .detail(format!(
            "{checked} roots; {at_pole} roots on a flagged T-matrix pole excluded"
        )),
        Check::new(4, M, "roots checked", checked as f64, Bound::AtLeast(100.0)),
        Check::holds(4, M, "determinant evaluation errors", errors.is_empty()).detail(errors.join("; ")),
    ]
}

// ------------------------------------------------------------- criterion 5

fn criterion_5() -> Vec<Check> {
    const M: &str = "wkb";
    let start = Instant::now();
    let nu0 = 500.0;
    let cfg = WkbConfig {
        theta: 0.0,
        mode: PhaseMode::ClosedForm,
        ..WkbConfig::default()
    };
    let spec = match quantize_spectrum(5..=25, nu0, &cfg, &UnifiedPotential) {
        Ok(s) => s,
        Err(e) => return vec![Check::error(5, M, "spectrum at nu0 = 500", e)],
    };
    let mut worst_ratio = 0.0_f64;
    for w in spec.levels.windows(2).filter(|w| w[0].n >= 10 && w[1].n == w[0].n + 1) {
        let ratio = (w[1].ln_abs_e_n - w[0].ln_abs_e_n).exp();
        worst_ratio = worst_ratio.max((ratio / ratio_law(w[0].n, nu0) - 1.0).abs());
    }
    vec![
        Check::new(
            5,
            M,
            "fitted slope vs -pi^2/(2 nu0), n in [5, 25]",
            spec.slope_rel_err(),
            Bound::AtMost(0.02),
        )
        .detail(format!("slope {:.6e}, theory {:.6e}", spec.slope, spec.slope_theory)),
        Check::new(5, M, "ratio law per level, n >= 10", worst_ratio, Bound::AtMost(0.03)),
        Check::new(5, M, "levels quantized", spec.levels.len() as f64, Bound::AtLeast(21.0)),
        Check::new(5, M, "runtime [s]", start.elapsed().as_secs_f64(), Bound::AtMost(10.0)),
    ]
}

// ------------------------------------------------------------- criterion 6

fn criterion_6(quad_tol: f64) -> Vec<Check> {
    const M: &str = "radial_oracle";
    let mut checks = Vec::new();
    let a1 = 100.0;
    let r1 = range_r1(a1).expect("a1 > 2");
    let h = 1e-3;
    let n_b = count_bound_states(a1, 20.0).expect("valid counting input");
    checks.push(match count_levels_numerov(&UnifiedPotential, 20.0, (1.0, r1), h) {
        Ok(count) => Check::new(
            6,
            M,
            "Numerov count - round(N_b), nu0 = 20, a1 = 100",
            count as f64 - n_b.round(),
            Bound::Between(-1.0, 1.0),
        )
        .detail(format!("count {count}, N_b = {n_b:.4}")),
        Err(e) => Check::error(6, M, "Numerov level count", e),
    });

    let nu0 = 100.0;
    let cfg = WkbConfig {
        mode: PhaseMode::Numeric,
        quad_tol,
        ..WkbConfig::default()
    };
    let compared = (|| -> Result<(f64, String), String> {
        let numerov = bound_states_numerov(&UnifiedPotential, nu0, (1.0, r1), 3, h).map_err(|e| e.to_string())?;
        let wkb = quantize_spectrum(1..=3, nu0, &cfg, &UnifiedPotential).map_err(|e| e.to_string())?;
        if numerov.energies.len() < 3 || wkb.levels.len() < 3 {
            return Err("fewer than 3 levels".into());
        }
        let rel = max_rel(wkb.levels.iter().map(|l| l.e_n).zip(numerov.energies.iter().copied()));
        Ok((
            rel,
            format!(
                "Numerov {:.5e}, {:.5e}, {:.5e}",
                numerov.energies[0], numerov.energies[1], numerov.energies[2]
            ),
        ))
    })();
    checks.push(match compared {
        Ok((rel, detail)) => Check::new(
            6,
            M,
            "3 deepest WKB levels vs Numerov, nu0 = 100",
            rel,
            Bound::AtMost(0.15),
        )
        .detail(detail),
        Err(e) => Check::error(6, M, "3 deepest WKB levels vs Numerov", e),
    });
    checks
}

// ------------------------------------------------------------- criterion 7

fn criterion_7(quad_tol: f64) -> Vec<Check> {
    const M: &str = "wkb";
    let (nu0, x_eps) = (100.0_f64, 1e4_f64);
    let scale = (x_eps / nu0).sqrt();
    let mut checks = Vec::new();
    checks.push(match phi_correction(2.0, x_eps, nu0, quad_tol) {
        // The quadrature error bound is charged against the tolerance.
        Ok(phi) => {
            let err = (phi * scale - (1.0 - LN_2)).abs();
            Check::new(
                7,
                M,
                "|Phi sqrt(x_eps/nu0) - (1 - ln 2)| + quadrature bound",
                err + quad_tol * scale,
                Bound::AtMost(1e-3),
            )
            .detail(format!("deviation {err:.3e}, quad_tol {quad_tol:e}"))
        }
        Err(e) => Check::error(7, M, "Phi limit", e),
    });
    let xs = log_grid(2.0, 0.5 * x_eps, 25);
    let chain: Result<f64, String> = xs.iter().try_fold(0.0_f64, |worst, &x| {
        let full = langer_phase(x, x_eps, nu0, &UnifiedPotential, quad_tol).map_err(|e| e.to_string())?;
        let phi = phi_correction(x, x_eps, nu0, quad_tol).map_err(|e| e.to_string())?;
        let approx = 2.0 * nu0.sqrt() * (x_eps.sqrt() - x.sqrt());
        Ok(worst.max((full + phi - approx).abs()))
    });
    checks.push(match chain {
        Ok(w) => Check::new(
            7,
            M,
            "phase chain: full + Phi - approximate, x in [2, x_eps/2]",
            w,
            Bound::AtMost(2.0 * quad_tol),
        ),
        Err(e) => Check::error(7, M, "phase chain", e),
    });
    checks
}

// ------------------------------------------------------------- criterion 8

fn coulomb_rms(nu0: f64, h: f64) -> Result<f64, String> {
    let n = (9.0 / h).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| 1.0 + h * i as f64).collect();
    let exact = zero_energy_exact(&grid, nu0, 1.0, 0.5).map_err(|e| e.to_string())?;
    let num = numerov_integrate_q(|x| nu0 / x, 1.0, h, n, (exact.values[0], exact.values[1]), 0.5)
        .map_err(|e| e.to_string())?;
    let ss: f64 = num.values.iter().zip(&exact.values).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((ss / (n + 1) as f64).sqrt())
}

fn criterion_8() -> Vec<Check> {
    const M: &str = "radial_oracle";
    let nu0 = 4.0;
    let rms = coulomb_rms(nu0, 1e-3);
    let ratio = coulomb_rms(nu0, 0.04).and_then(|a| Ok(a / coulomb_rms(nu0, 0.02)?));
    vec![
        match rms {
            Ok(v) => Check::new(8, M, "Coulomb-in-x RMS vs exact, h = 1e-3", v, Bound::AtMost(1e-6)),
            Err(e) => Check::error(8, M, "Coulomb-in-x RMS", e),
        },
        match ratio {
            Ok(v) => Check::new(
                8,
                M,
                "error ratio on halving h = 0.04 -> 0.02",
                v,
                Bound::Between(12.0, 20.0),
            ),
            Err(e) => Check::error(8, M, "error ratio on halving", e),
        },
    ]
}

// ------------------------------------------------------------- criterion 9

fn criterion_9() -> Vec<Check> {
    const M: &str = "scattering";
    let nu0 = 100.0;
    let mut checks = Vec::new();
    let table = match resonance_positions(1..=20, nu0) {
        Ok(t) => t,
        Err(e) => return vec![Check::error(9, M, "resonance table", e)],
    };
    let round_trip = table
        .rows
        .iter()
        .map(|r| count_bound_states(r.a1_n, nu0).map(|nb| (nb - (r.n as f64 + 0.5)).abs()))
        .try_fold(0.0_f64, |w, d| d.map(|d| w.max(d)));
    checks.push(match round_trip {
        Ok(w) => Check::new(9, M, "|N_b(a1^(n)) - (n + 1/2)|, n in [1, 20]", w, Bound::AtMost(1e-12)),
        Err(e) => Check::error(9, M, "round trip", e),
    });
    let n = 20.0_f64;
    let ratio = ln_a1_resonance(20, nu0) / (PI * PI * n * n / (2.0 * nu0));
    checks.push(Check::new(
        9,
        M,
        "|ln a1^(20) / (pi^2 n^2/(2 nu0)) - 1|, nu0 = 100",
        (ratio - 1.0).abs(),
        Bound::AtMost(0.1),
    ));

    let mut diverges = true;
    let mut worst_side = f64::INFINITY;
    for n in 1..=5 {
        let ln_res = ln_a1_resonance(n, nu0);
        let pole = matches!(
            atom_molecule_a0(ln_res.exp(), nu0),
            Err(ScatteringError::ResonancePole { .. })
        );
        let side = |d: f64| atom_molecule_a0((ln_res + d).exp(), nu0).map(|l| (l.a0 / l.range_r1).ln());
        match (side(-1e-9), side(1e-9)) {
            (Ok(below), Ok(above)) => {
                worst_side = worst_side.min(below.abs()).min(above.abs());
                diverges &= pole && below < 0.0 && above > 0.0;
            }
            _ => diverges = false,
        }
    }
    checks.push(Check::holds(
        9,
        M,
        "A0 pole flagged at a1^(n); A0 -> 0 below, -> inf above",
        diverges,
    ));
    checks.push(Check::new(
        9,
        M,
        "min |ln(A0/R1)| at 1e-9 from a1^(n), n in [1, 5]",
        worst_side,
        Bound::AtLeast(100.0),
    ));

    let at_integer = (1..=5).try_fold(0.0_f64, |w, k| {
        let a1 = 2.0 * (PI * PI * (k * k) as f64 / (2.0 * nu0)).exp();
        atom_molecule_a0(a1, nu0).map(|l| w.max((l.a0 / l.range_r1 - 1.0).abs()))
    });
    checks.push(match at_integer {
        Ok(w) => Check::new(9, M, "|A0/R1 - 1| at integer N_b", w, Bound::AtMost(1e-10)),
        Err(e) => Check::error(9, M, "A0 at integer N_b", e),
    });
    checks
}

// ------------------------------------------------------------ criterion 10

fn criterion_10() -> Vec<Check> {
    let cfg = RunConfig::default();
    let hash = cfg.hash();
    let parse = |t: &crate::output::Table| {
        t.to_bytes()
            .and_then(|b| ParsedCsv::parse(&String::from_utf8_lossy(&b)))
    };
    let mut potentials = BTreeMap::new();
    for t in potentials_tables(&cfg, &hash, &Branch::ALL) {
        match parse(&t.named.table) {
            Ok(csv) => {
                potentials.insert(t.named.file.clone(), csv);
            }
            Err(e) => return vec![Check::error(10, "cli_io", "potential tables", e)],
        }
    }
    let mut checks = potential_shape_checks(&potentials, &cfg.twobody);
    match spectrum_tables(&cfg, &hash, crate::commands::DEFAULT_SPECTRUM_N_MAX) {
        Ok(tables) => {
            let parsed: Result<BTreeMap<String, ParsedCsv>, CliError> =
                tables.iter().map(|t| Ok((t.file.clone(), parse(&t.table)?))).collect();
            match parsed {
                Ok(p) => checks.extend(spectrum_shape_checks(&p, &cfg.spectrum_mass_ratios)),
                Err(e) => checks.push(Check::error(10, "cli_io", "spectrum tables", e)),
            }
        }
        Err(e) => checks.push(Check::error(10, "cli_io", "spectrum tables", e)),
    }
    checks
}

/// `(R, V)` pairs with a value, and the grid.
fn curve(files: &BTreeMap<String, ParsedCsv>, branch: Branch) -> Option<(Vec<f64>, Vec<Option<f64>>)> {
    let csv = files.get(&potential_file_name(branch))?;
    let r: Option<Vec<f64>> = csv.column("R")?.into_iter().collect();
    Some((r?, csv.column("V")?))
}

fn defined(v: &[Option<f64>]) -> Vec<f64> {
    v.iter().flatten().copied().collect()
}

/// Shape assertions on the default potential curves, keyed by file name.
pub fn potential_shape_checks(files: &BTreeMap<String, ParsedCsv>, params: &TwoBodyParams) -> Vec<Check> {
    const M: &str = "cli_io";
    let mut checks = Vec::new();
    let dimers = match dimer_energies(params) {
        Ok(d) => d,
        Err(e) => return vec![Check::error(10, M, "dimer energies", e)],
    };
    let (eps0, eps1) = (dimers.eps0, dimers.eps1);
    let get = |b: Branch| curve(files, b).filter(|(r, v)| !r.is_empty() && r.len() == v.len());
    let mut missing = Vec::new();

    // Two s-wave curves.
    if let (Some((r, vp)), Some((_, vm))) = (get(Branch::SWavePlus), get(Branch::SWaveMinus)) {
        let plus = defined(&vp);
        checks.push(Check::holds(
            10,
            M,
            "s+: defined on the whole grid",
            plus.len() == r.len(),
        ));
        checks.push(Check::new(
            10,
            M,
            "s+: below eps0 (max (V - eps0)/|eps0|)",
            plus.iter().map(|v| (v - eps0) / eps0.abs()).fold(f64::MIN, f64::max),
            Bound::AtMost(1e-12),
        ));
        checks.push(Check::new(
            10,
            M,
            "s+: non-decreasing (worst step)",
            worst_step(&plus, true),
            Bound::AtMost(0.0),
        ));
        if let Some(last) = vp.last().copied().flatten() {
            checks.push(Check::new(
                10,
                M,
                "s+: |V(R_max) - eps0|/|eps0|",
                ((last - eps0) / eps0).abs(),
                Bound::AtMost(1e-6),
            ));
        }
        let exists_iff = r.iter().zip(&vm).all(|(r, v)| v.is_some() == (*r > params.a0));
        checks.push(Check::holds(10, M, "s-: defined exactly for R > a0", exists_iff));
        let minus = defined(&vm);
        checks.push(Check::new(
            10,
            M,
            "s-: above eps0 (min (V - eps0)/|eps0|)",
            minus.iter().map(|v| (v - eps0) / eps0.abs()).fold(f64::MAX, f64::min),
            Bound::AtLeast(0.0),
        ));
        checks.push(Check::new(
            10,
            M,
            "s-: non-increasing, repulsive (worst step)",
            worst_step(&minus, false),
            Bound::AtMost(0.0),
        ));
        checks.push(Check::holds(
            10,
            M,
            "s-: above s+ wherever defined",
            vp.iter().zip(&vm).all(|(p, m)| match (p, m) {
                (Some(p), Some(m)) => m > p,
                _ => true,
            }),
        ));
    } else {
        missing.push("s-wave");
    }

    // p-wave away from resonance.
    if let (Some((r, ip)), Some((_, im))) = (get(Branch::PWaveIPlus), get(Branch::PWaveIMinus)) {
        checks.push(Check::new(
            10,
            M,
            "I+: non-decreasing (worst step)",
            worst_step(&defined(&ip), true),
            Bound::AtMost(0.0),
        ));
        checks.push(Check::new(
            10,
            M,
            "I-: non-increasing (worst step)",
            worst_step(&defined(&im), false),
            Bound::AtMost(0.0),
        ));
        let threshold = (2.0 * params.a1()).sqrt();
        let exists_iff = r.iter().zip(&im).all(|(r, v)| v.is_some() == (*r > threshold));
        checks.push(Check::holds(
            10,
            M,
            "I-: defined exactly for R > sqrt(2 a1)",
            exists_iff,
        ));
        for (tag, v) in [("I+", &ip), ("I-", &im)] {
            match v.last().copied().flatten() {
                Some(last) => checks.push(Check::new(
                    10,
                    M,
                    format!("{tag}: |V(R_max) - eps1|/|eps1|"),
                    ((last - eps1) / eps1).abs(),
                    Bound::AtMost(1e-3),
                )),
                None => checks.push(Check::holds(10, M, format!("{tag}: defined at R_max"), false)),
            }
        }
        if let (Some((_, iip)), Some((_, iim))) = (get(Branch::PWaveIIPlus), get(Branch::PWaveIIMinus)) {
            for (tag, a, b) in [("+", &ip, &iip), ("-", &im, &iim)] {
                match (a.last().copied().flatten(), b.last().copied().flatten()) {
                    (Some(x), Some(y)) => checks.push(Check::new(
                        10,
                        M,
                        format!("|V_II{tag} - V_I{tag}|/|eps1| at R_max"),
                        (x - y).abs() / eps1.abs(),
                        Bound::AtMost(1e-3),
                    )),
                    _ => checks.push(Check::holds(
                        10,
                        M,
                        format!("I{tag} and II{tag} defined at R_max"),
                        false,
                    )),
                }
            }
            checks.push(Check::new(
                10,
                M,
                "II+: non-decreasing (worst step)",
                worst_step(&defined(&iip), true),
                Bound::AtMost(0.0),
            ));
        } else {
            missing.push("branch II");
        }
    } else {
        missing.push("branch I");
    }

    // Resonant curves rise towards threshold.
    for branch in [Branch::PWaveIZero, Branch::PWaveIIZero, Branch::AsymptoticUnified] {
        match get(branch) {
            Some((_, v)) => {
                let d = defined(&v);
                checks.push(Check::new(
                    10,
                    M,
                    format!("{branch}: non-decreasing (worst step)"),
                    worst_step(&d, true),
                    Bound::AtMost(0.0),
                ));
                checks.push(Check::holds(
                    10,
                    M,
                    format!("{branch}: negative, defined at R_max"),
                    d.iter().all(|x| *x < 0.0) && v.last().copied().flatten().is_some(),
                ));
            }
            None => missing.push(branch.tag()),
        }
    }
    if !missing.is_empty() {
        checks.push(Check::holds(10, M, "all potential curves present", false).detail(missing.join(", ")));
    }
    checks
}

/// Ratio-curve assertions for each mass ratio's spectrum table, keyed by file name.
pub fn spectrum_shape_checks(files: &BTreeMap<String, ParsedCsv>, mass_ratios: &[f64]) -> Vec<Check> {
    const M: &str = "cli_io";
    let mut checks = Vec::new();
    for &ratio in mass_ratios {
        let name = spectrum_file_name(ratio);
        let Some(csv) = files.get(&name) else {
            checks.push(Check::holds(10, M, format!("{name} present"), false));
            continue;
        };
        let (Some(got), Some(law)) = (csv.column("ratio"), csv.column("ratio_law")) else {
            checks.push(Check::holds(10, M, format!("{name}: ratio columns"), false));
            continue;
        };
        let pairs: Vec<(f64, f64)> = got.iter().zip(&law).filter_map(|(a, b)| Some(((*a)?, (*b)?))).collect();
        checks.push(Check::new(
            10,
            M,
            format!("m/M = {ratio}: levels"),
            csv.rows.len() as f64,
            Bound::AtLeast(3.0),
        ));
        checks.push(Check::holds(
            10,
            M,
            format!("m/M = {ratio}: 0 < E_(n+1)/E_n < 1"),
            !pairs.is_empty() && pairs.iter().all(|(a, _)| *a > 0.0 && *a < 1.0),
        ));
        checks.push(Check::new(
            10,
            M,
            format!("m/M = {ratio}: ratio vs ratio law"),
            max_rel(pairs.iter().copied()),
            Bound::AtMost(0.03),
        ));
    }
    checks
}
