//! Run configuration: INI-style `key = value` lines under `[section]` headers.
//!
//! Every key is optional. Defaults reproduce the figure parameters
//! `a0 = 10`, `a1 = 100`, `r0 = 1.2` over `R ∈ [1.5, 200]`.

use std::path::{Path, PathBuf};

use ini::Ini;
use planar3b_core::twobody::{MassConfig, TwoBodyParams};
use planar3b_core::wkb::{PhaseMode, WkbConfig};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub log: bool,
}

impl SweepConfig {
    pub fn grid(&self) -> Vec<f64> {
        if self.log {
            planar3b_core::roots::log_grid(self.r_min, self.r_max, self.points)
        } else {
            planar3b_core::roots::linear_grid(self.r_min, self.r_max, self.points)
        }
    }
}

/// Conversion to atomic units when masses are given in atomic mass units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalUnits {
    /// Reduced light-heavy mass in electron masses.
    pub mu_me: f64,
    pub r1_bohr: f64,
}

/// Electron masses per atomic mass unit.
pub const AMU_IN_ME: f64 = 1_822.888_486_209;

impl PhysicalUnits {
    pub fn bohr(&self, r: f64) -> f64 {
        r * self.r1_bohr
    }

    /// Natural energy unit `ħ²/(μ r1²)` expressed in hartree.
    pub fn hartree(&self, e: f64) -> f64 {
        e / (self.mu_me * self.r1_bohr * self.r1_bohr)
    }
}

/// Light-particle field sampling for the `wavefunction` command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    /// Heavy-heavy separation, units of r1.
    pub separation: f64,
    /// The square `[-half_width, half_width]²` is sampled.
    pub half_width: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub masses: MassConfig,
    pub twobody: TwoBodyParams,
    pub wkb: WkbConfig,
    pub sweep: SweepConfig,
    /// Light-to-heavy mass ratios for the spectrum command.
    pub spectrum_mass_ratios: Vec<f64>,
    pub numerov_step: f64,
    pub field: FieldConfig,
    /// Wave numbers for the cross-section table.
    pub scattering_k: Vec<f64>,
    pub physical: Option<PhysicalUnits>,
    pub output_dir: PathBuf,
}

pub const DEFAULT_MASS_RATIOS: [f64; 3] = [0.5, 0.1, 1e-5];

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            masses: MassConfig::from_ratio(0.1).expect("valid default mass ratio"),
            twobody: TwoBodyParams::with_a1(10.0, 100.0, 1.2).expect("valid default two-body parameters"),
            wkb: WkbConfig::default(),
            sweep: SweepConfig {
                r_min: 1.5,
                r_max: 200.0,
                points: 200,
                log: true,
            },
            spectrum_mass_ratios: DEFAULT_MASS_RATIOS.to_vec(),
            numerov_step: 1e-3,
            field: FieldConfig {
                separation: 10.0,
                half_width: 20.0,
                points: 81,
            },
            scattering_k: vec![1e-5, 1e-4, 1e-3],
            physical: None,
            output_dir: PathBuf::from("planar3b-out"),
        }
    }
}

const KNOWN: &[(&str, &[&str])] = &[
    ("masses", &["m_over_M", "m", "M", "nu0", "unit"]),
    ("twobody", &["a0", "a1", "a1_inv", "r0"]),
    ("wkb", &["theta", "r_inner", "quad_tol", "r_max", "mode"]),
    ("sweep", &["r_min", "r_max", "points", "log"]),
    ("spectrum", &["mass_ratios"]),
    ("numerov", &["h"]),
    ("wavefunction", &["separation", "half_width", "points"]),
    ("scattering", &["k"]),
    ("units", &["r1_bohr"]),
    ("output", &["dir"]),
];

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

struct Section<'a> {
    name: &'a str,
    props: Option<&'a ini::Properties>,
}

impl Section<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.props.and_then(|p| p.get(key)).map(str::trim)
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| config_err(format!("[{}] {key} = {v:?} is not a number", self.name)))
            })
            .transpose()
    }

    fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| config_err(format!("[{}] {key} = {v:?} is not a count", self.name)))
            })
            .transpose()
    }

    fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        self.raw(key)
            .map(|v| match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(config_err(format!("[{}] {key} = {v:?} is not a boolean", self.name))),
            })
            .transpose()
    }
}

/// Comma-separated positive finite numbers.
fn positive_list(list: &str) -> Option<Vec<f64>> {
    let values: Vec<f64> = list
        .split(',')
        .map(|v| v.trim().parse::<f64>().ok())
        .collect::<Option<_>>()?;
    let ok = !values.is_empty() && values.iter().all(|v| *v > 0.0 && v.is_finite());
    ok.then_some(values)
}

impl RunConfig {
    /// Defaults when `path` is `None`.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text =
                    std::fs::read_to_string(p).map_err(|e| config_err(format!("cannot read {}: {e}", p.display())))?;
                Self::from_ini_str(&text)
            }
        }
    }

    pub fn from_ini_str(text: &str) -> Result<Self, CliError> {
        let ini = Ini::load_from_str(text).map_err(|e| config_err(format!("parse error: {e}")))?;
        for (section, props) in ini.iter() {
            let Some(name) = section else {
                if let Some((key, _)) = props.iter().next() {
                    return Err(config_err(format!("key {key:?} outside any section")));
                }
                continue;
            };
            let Some((_, keys)) = KNOWN.iter().find(|(s, _)| *s == name) else {
                return Err(config_err(format!("unknown section [{name}]")));
            };
            for (key, _) in props.iter() {
                if !keys.contains(&key) {
                    return Err(config_err(format!("unknown key {key:?} in [{name}]")));
                }
            }
        }
        let section = |name| Section {
            name,
            props: ini.section(Some(name)),
        };
        let mut cfg = Self::default();

        let masses = section("masses");
        let ratio = masses.f64("m_over_M")?;
        let (m, big_m) = (masses.f64("m")?, masses.f64("M")?);
        let nu0 = masses.f64("nu0")?;
        let given = [ratio.is_some(), m.is_some() || big_m.is_some(), nu0.is_some()];
        if given.iter().filter(|&&g| g).count() > 1 {
            return Err(config_err("[masses]: give only one of m_over_M, (m, M) or nu0"));
        }
        let two_body = |e: planar3b_core::twobody::TwoBodyError| config_err(e.to_string());
        if let Some(r) = ratio {
            cfg.masses = MassConfig::from_ratio(r).map_err(two_body)?;
        } else if m.is_some() || big_m.is_some() {
            let (Some(m), Some(big_m)) = (m, big_m) else {
                return Err(config_err("[masses]: m and M must be given together"));
            };
            cfg.masses = MassConfig::new(m, big_m).map_err(two_body)?;
        } else if let Some(n) = nu0 {
            cfg.masses = MassConfig::from_nu0(n).map_err(two_body)?;
        }

        let amu = match masses.raw("unit").map(str::to_ascii_lowercase).as_deref() {
            None | Some("natural") => false,
            Some("amu") => true,
            Some(other) => {
                return Err(config_err(format!(
                    "[masses] unit = {other:?}: expected natural or amu"
                )))
            }
        };
        let r1_bohr = section("units").f64("r1_bohr")?;
        if amu {
            if m.is_none() {
                return Err(config_err("[masses] unit = amu needs m and M"));
            }
            let Some(r1_bohr) = r1_bohr.filter(|r| *r > 0.0 && r.is_finite()) else {
                return Err(config_err("[masses] unit = amu needs a positive [units] r1_bohr"));
            };
            cfg.physical = Some(PhysicalUnits {
                mu_me: cfg.masses.mu * AMU_IN_ME,
                r1_bohr,
            });
        } else if r1_bohr.is_some() {
            return Err(config_err("[units] r1_bohr needs [masses] unit = amu"));
        }

        let tb = section("twobody");
        let a0 = tb.f64("a0")?.unwrap_or(cfg.twobody.a0);
        let r0 = tb.f64("r0")?.unwrap_or(cfg.twobody.r0);
        let a1_inv = match (tb.f64("a1")?, tb.f64("a1_inv")?) {
            (Some(_), Some(_)) => return Err(config_err("[twobody]: give a1 or a1_inv, not both")),
            (Some(a1), None) if a1.is_infinite() && a1 > 0.0 => 0.0,
            (Some(a1), None) if a1 > 0.0 => 1.0 / a1,
            (Some(a1), None) => return Err(config_err(format!("[twobody] a1 = {a1} must be positive"))),
            (None, Some(inv)) => inv,
            (None, None) => cfg.twobody.a1_inv,
        };
        cfg.twobody = TwoBodyParams::new(a0, a1_inv, r0).map_err(two_body)?;

        let wkb = section("wkb");
        cfg.wkb.theta = wkb.f64("theta")?.unwrap_or(cfg.wkb.theta);
        cfg.wkb.r_inner = wkb.f64("r_inner")?.unwrap_or(cfg.wkb.r_inner);
        cfg.wkb.quad_tol = wkb.f64("quad_tol")?.unwrap_or(cfg.wkb.quad_tol);
        cfg.wkb.r_max = wkb.f64("r_max")?.unwrap_or(cfg.wkb.r_max);
        if let Some(mode) = wkb.raw("mode") {
            cfg.wkb.mode = match mode.to_ascii_lowercase().as_str() {
                "closed" | "closed_form" => PhaseMode::ClosedForm,
                "numeric" => PhaseMode::Numeric,
                other => {
                    return Err(config_err(format!(
                        "[wkb] mode = {other:?}: expected closed or numeric"
                    )))
                }
            };
        }
        cfg.wkb.validate().map_err(|e| config_err(e.to_string()))?;

        let sweep = section("sweep");
        cfg.sweep.r_min = sweep.f64("r_min")?.unwrap_or(cfg.sweep.r_min);
        cfg.sweep.r_max = sweep.f64("r_max")?.unwrap_or(cfg.sweep.r_max);
        cfg.sweep.points = sweep.usize("points")?.unwrap_or(cfg.sweep.points);
        cfg.sweep.log = sweep.bool("log")?.unwrap_or(cfg.sweep.log);
        let s = cfg.sweep;
        if s.points < 2 {
            return Err(config_err(format!("[sweep] points = {} must be at least 2", s.points)));
        }
        if !(s.r_min > 0.0 && s.r_min < s.r_max && s.r_max.is_finite()) {
            return Err(config_err(format!(
                "[sweep] needs 0 < r_min < r_max, got {} and {}",
                s.r_min, s.r_max
            )));
        }

        if let Some(list) = section("spectrum").raw("mass_ratios") {
            cfg.spectrum_mass_ratios =
                positive_list(list).ok_or_else(|| config_err(format!("[spectrum] mass_ratios = {list:?}")))?;
        }

        let h = section("numerov").f64("h")?.unwrap_or(cfg.numerov_step);
        if !(h > 0.0 && h < 1.0) {
            return Err(config_err(format!("[numerov] h = {h} must lie in (0, 1)")));
        }
        cfg.numerov_step = h;

        let field = section("wavefunction");
        cfg.field.separation = field.f64("separation")?.unwrap_or(cfg.field.separation);
        cfg.field.half_width = field.f64("half_width")?.unwrap_or(cfg.field.half_width);
        cfg.field.points = field.usize("points")?.unwrap_or(cfg.field.points);
        let f = cfg.field;
        if !(f.separation > 0.0 && f.half_width > 0.0 && f.points >= 2) {
            return Err(config_err(
                "[wavefunction] needs separation > 0, half_width > 0, points >= 2",
            ));
        }

        if let Some(list) = section("scattering").raw("k") {
            cfg.scattering_k = positive_list(list).ok_or_else(|| config_err(format!("[scattering] k = {list:?}")))?;
        }

        if let Some(dir) = section("output").raw("dir") {
            cfg.output_dir = PathBuf::from(dir);
        }
        Ok(cfg)
    }

    /// SHA-256 of the resolved physics settings (output location excluded), 16 hex digits.
    pub fn hash(&self) -> String {
        let mode = match self.wkb.mode {
            PhaseMode::ClosedForm => "closed",
            PhaseMode::Numeric => "numeric",
        };
        let canonical = format!(
            "m={:?}\nM={:?}\na0={:?}\na1_inv={:?}\nr0={:?}\ntheta={:?}\nr_inner={:?}\nquad_tol={:?}\n\
             wkb_r_max={:?}\nmode={mode}\nr_min={:?}\nr_max={:?}\npoints={}\nlog={}\nratios={:?}\nh={:?}\n\
             field={:?}\nk={:?}\nunits={:?}\n",
            self.masses.m,
            self.masses.big_m,
            self.twobody.a0,
            self.twobody.a1_inv,
            self.twobody.r0,
            self.wkb.theta,
            self.wkb.r_inner,
            self.wkb.quad_tol,
            self.wkb.r_max,
            self.sweep.r_min,
            self.sweep.r_max,
            self.sweep.points,
            self.sweep.log,
            self.spectrum_mass_ratios,
            self.numerov_step,
            self.field,
            self.scattering_k,
            self.physical,
        );
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(RunConfig::from_ini_str("").unwrap(), RunConfig::default());
    }

    #[test]
    fn reads_every_section() {
        let text = "\
[masses]
m_over_M = 0.5
[twobody]
a0 = 5
a1_inv = 0
[wkb]
theta = 0.25
mode = numeric
[sweep]
r_min = 2
r_max = 50
points = 11
log = false
[spectrum]
mass_ratios = 0.5, 1e-3
[numerov]
h = 2e-4
[output]
dir = elsewhere
";
        let cfg = RunConfig::from_ini_str(text).unwrap();
        assert_eq!(cfg.masses.nu0, 2.5);
        assert_eq!(cfg.twobody.a0, 5.0);
        assert_eq!(cfg.twobody.a1_inv, 0.0);
        assert_eq!(cfg.wkb.mode, PhaseMode::Numeric);
        assert_eq!(
            cfg.sweep.grid(),
            vec![2.0, 6.8, 11.6, 16.4, 21.2, 26.0, 30.8, 35.6, 40.4, 45.2, 50.0]
        );
        assert_eq!(cfg.spectrum_mass_ratios, vec![0.5, 1e-3]);
        assert_eq!(cfg.numerov_step, 2e-4);
        assert_eq!(cfg.output_dir, PathBuf::from("elsewhere"));
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        for bad in [
            "[nope]\nx = 1",
            "[twobody]\nb0 = 1",
            "[twobody]\na0 = ten",
            "[twobody]\na0 = -1",
            "[twobody]\na1 = 100\na1_inv = 0.01",
            "[masses]\nm_over_M = 0.1\nnu0 = 3",
            "[masses]\nm = 1",
            "[sweep]\npoints = 1",
            "[sweep]\nr_min = 10\nr_max = 5",
            "[wkb]\nquad_tol = 0",
            "[wkb]\nmode = fancy",
            "stray = 1",
            "[masses]\nunit = amu\nm = 1\nM = 87",
            "[units]\nr1_bohr = 100",
            "[scattering]\nk = 0.1, -1",
            "[wavefunction]\npoints = 1",
        ] {
            assert!(
                matches!(RunConfig::from_ini_str(bad), Err(CliError::Config(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn atomic_units_need_a_length() {
        let cfg = RunConfig::from_ini_str("[masses]\nunit = amu\nm = 1\nM = 100\n[units]\nr1_bohr = 50").unwrap();
        let units = cfg.physical.unwrap();
        assert!((units.mu_me / AMU_IN_ME - 200.0 / 201.0).abs() < 1e-14);
        assert_eq!(units.bohr(2.0), 100.0);
        assert!((units.hartree(1.0) * units.mu_me * 2500.0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hash_tracks_physics_not_output_dir() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.output_dir = PathBuf::from("other");
        assert_eq!(a.hash(), b.hash());
        b.twobody.a0 = 11.0;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }
}
