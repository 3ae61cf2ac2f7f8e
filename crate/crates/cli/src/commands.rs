//! The data-producing subcommands. Each builds its tables in memory first;
//! `run_*` wrappers write them under the output directory.

use std::path::{Path, PathBuf};

use planar3b_core::potentials::{
    evaluate_branch, light_wavefunction, solve_pwave_i, solve_pwave_ii, Branch, ScanOptions, Sign, UnifiedPotential,
    WaveBranch,
};
use planar3b_core::radial::{bound_state_wavefunction, bound_states_numerov};
use planar3b_core::scattering::{atom_molecule_a0, cross_section, resonance_positions, within_validity};
use planar3b_core::twobody::{range_r1, MassConfig};
use planar3b_core::wkb::{quantize_spectrum, ratio_law};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{num, opt, Table};

/// A table and the file name it is written to.
pub struct NamedTable {
    pub file: String,
    pub table: Table,
}

fn write_all(tables: &[NamedTable], dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    tables.iter().map(|t| t.table.write(dir, &t.file)).collect()
}

/// File-system safe branch name.
pub fn branch_file_stem(branch: Branch) -> &'static str {
    match branch {
        Branch::SWavePlus => "s_plus",
        Branch::SWaveMinus => "s_minus",
        Branch::PWaveIPlus => "I_plus",
        Branch::PWaveIMinus => "I_minus",
        Branch::PWaveIZero => "I_zero",
        Branch::PWaveIIPlus => "II_plus",
        Branch::PWaveIIMinus => "II_minus",
        Branch::PWaveIIZero => "II_zero",
        Branch::AsymptoticUnified => "unified",
    }
}

pub fn potential_file_name(branch: Branch) -> String {
    format!("potential_{}.csv", branch_file_stem(branch))
}

/// Parses a comma-separated `--branch` list; empty selects every branch.
pub fn parse_branches(list: Option<&str>) -> Result<Vec<Branch>, CliError> {
    let Some(list) = list.filter(|l| !l.trim().is_empty()) else {
        return Ok(Branch::ALL.to_vec());
    };
    let mut out = Vec::new();
    for tag in list.split(',') {
        let branch = Branch::from_tag(tag).ok_or_else(|| {
            let known: Vec<&str> = Branch::ALL.iter().map(|b| b.tag()).collect();
            CliError::Config(format!(
                "unknown branch {:?}; expected one of {}",
                tag.trim(),
                known.join(", ")
            ))
        })?;
        if !out.contains(&branch) {
            out.push(branch);
        }
    }
    Ok(out)
}

pub struct BranchTable {
    pub named: NamedTable,
    /// Share of grid points without a converged value.
    pub failure_rate: f64,
}

/// One table per branch: `R,V,branch,converged,residual` over the sweep grid.
pub fn potentials_tables(cfg: &RunConfig, hash: &str, branches: &[Branch]) -> Vec<BranchTable> {
    let grid = cfg.sweep.grid();
    let opts = ScanOptions::default();
    let mut columns = vec!["R", "V", "branch", "converged", "residual"];
    if cfg.physical.is_some() {
        columns.extend(["R_bohr", "V_hartree"]);
    }
    branches
        .iter()
        .map(|&branch| {
            let points: Vec<_> = grid
                .par_iter()
                .map(|&r| evaluate_branch(branch, &cfg.twobody, r, &opts))
                .collect();
            let mut table = Table::new("potentials", hash, &columns);
            let mut failed = 0;
            for p in &points {
                if p.v.is_none() || !p.converged {
                    failed += 1;
                }
                let residual = if p.residual.is_finite() {
                    num(p.residual)
                } else {
                    String::new()
                };
                let mut row = vec![
                    num(p.r),
                    opt(p.v),
                    branch.tag().to_owned(),
                    p.converged.to_string(),
                    residual,
                ];
                if let Some(units) = cfg.physical {
                    row.push(num(units.bohr(p.r)));
                    row.push(opt(p.v.map(|v| units.hartree(v))));
                }
                table.push(row);
            }
            BranchTable {
                named: NamedTable {
                    file: potential_file_name(branch),
                    table,
                },
                failure_rate: failed as f64 / points.len() as f64,
            }
        })
        .collect()
}

/// Writes every branch, then fails if any branch lacks a value at more than half the grid.
pub fn run_potentials(cfg: &RunConfig, hash: &str, dir: &Path, branches: &[Branch]) -> Result<Vec<PathBuf>, CliError> {
    let tables = potentials_tables(cfg, hash, branches);
    let mut paths = Vec::new();
    let mut worst: Vec<String> = Vec::new();
    for t in &tables {
        paths.push(t.named.table.write(dir, &t.named.file)?);
        if t.failure_rate > 0.5 {
            worst.push(format!("{} ({:.0}% missing)", t.named.file, 100.0 * t.failure_rate));
        }
    }
    if !worst.is_empty() {
        return Err(CliError::Solver(format!(
            "more than half of the grid failed for {}",
            worst.join(", ")
        )));
    }
    Ok(paths)
}

pub const DEFAULT_SPECTRUM_N_MAX: u32 = 25;

pub fn spectrum_file_name(m_over_big_m: f64) -> String {
    format!("spectrum_m_over_M_{m_over_big_m}.csv")
}

/// Per mass ratio: levels with the `E_{n+1}/E_n` column, plus a fit summary table.
pub fn spectrum_tables(cfg: &RunConfig, hash: &str, n_max: u32) -> Result<Vec<NamedTable>, CliError> {
    if n_max < 3 {
        return Err(CliError::Config(format!(
            "--n-max {n_max}: at least 3 levels are needed"
        )));
    }
    let results: Vec<_> = cfg
        .spectrum_mass_ratios
        .par_iter()
        .map(|&ratio| {
            let masses = MassConfig::from_ratio(ratio).map_err(|e| CliError::Config(e.to_string()))?;
            let spec = quantize_spectrum(1..=n_max, masses.nu0, &cfg.wkb, &UnifiedPotential)
                .map_err(|e| CliError::Solver(format!("m/M = {ratio}: {e}")))?;
            let usable = spec.levels.iter().filter(|l| l.ln_abs_e_n.is_finite()).count();
            if usable < 3 {
                return Err(CliError::Solver(format!("m/M = {ratio}: only {usable} levels")));
            }
            Ok((ratio, masses.nu0, spec))
        })
        .collect::<Result<_, CliError>>()?;

    let mut out = Vec::new();
    let mut summary = Table::new(
        "spectrum",
        hash,
        &[
            "m_over_M",
            "nu0",
            "E0_fit",
            "slope",
            "slope_theory",
            "rel_err",
            "levels",
            "rejected",
        ],
    );
    for (ratio, nu0, spec) in results {
        let mut table = Table::new(
            "spectrum",
            hash,
            &["n", "rho_n", "ln_rho_n", "E_n", "ln_abs_E_n", "ratio", "ratio_law"],
        );
        for (i, level) in spec.levels.iter().enumerate() {
            let next = spec.levels.get(i + 1).filter(|l| l.n == level.n + 1);
            let ratio_col = next
                .map(|l| (l.ln_abs_e_n - level.ln_abs_e_n).exp())
                .filter(|r| r.is_finite());
            table.push(vec![
                level.n.to_string(),
                num(level.rho_n),
                num(level.ln_rho_n),
                num(level.e_n),
                num(level.ln_abs_e_n),
                opt(ratio_col),
                opt(next.map(|_| ratio_law(level.n, nu0))),
            ]);
        }
        let rejected: Vec<String> = spec.rejected.iter().map(u32::to_string).collect();
        summary.push(vec![
            num(ratio),
            num(nu0),
            num(spec.e0_fit),
            num(spec.slope),
            num(spec.slope_theory),
            num(spec.slope_rel_err()),
            spec.levels.len().to_string(),
            rejected.join(" "),
        ]);
        out.push(NamedTable {
            file: spectrum_file_name(ratio),
            table,
        });
    }
    out.push(NamedTable {
        file: "spectrum_summary.csv".into(),
        table: summary,
    });
    Ok(out)
}

pub fn run_spectrum(cfg: &RunConfig, hash: &str, dir: &Path, n_max: u32) -> Result<Vec<PathBuf>, CliError> {
    write_all(&spectrum_tables(cfg, hash, n_max)?, dir)
}

pub const DEFAULT_RESONANCE_N_MAX: u32 = 20;

/// Resonance positions for the configured `nu0`, and the cross-section at the configured `a1`.
pub fn resonance_tables(cfg: &RunConfig, hash: &str, n_max: u32) -> Result<Vec<NamedTable>, CliError> {
    let nu0 = cfg.masses.nu0;
    let res = resonance_positions(1..=n_max.max(1), nu0).map_err(|e| CliError::Config(e.to_string()))?;
    if res.any_capped() {
        log::warn!("resonance positions beyond f64 range were clamped (see the capped column)");
    }
    let mut table = Table::new(
        "resonances",
        hash,
        &["n", "a1_n_exact", "a1_n_asymptotic", "A0_midpoint", "N_b_at", "capped"],
    );
    for r in &res.rows {
        table.push(vec![
            r.n.to_string(),
            num(r.a1_n),
            num(r.a1_n_asymptotic),
            opt(r.a0_midpoint),
            num(r.n_b_at),
            r.capped.to_string(),
        ]);
    }
    let mut out = vec![NamedTable {
        file: "resonances.csv".into(),
        table,
    }];

    let a1 = cfg.twobody.a1();
    match atom_molecule_a0(a1, nu0) {
        Ok(len) => {
            let mut sigma = Table::new("resonances", hash, &["k", "sigma0", "A0", "k_R1", "within_validity"]);
            for &k in &cfg.scattering_k {
                let s = cross_section(k, len.a0).map_err(|e| CliError::Solver(e.to_string()))?;
                let ok = within_validity(k, len.range_r1);
                if !ok {
                    log::warn!(
                        "k = {k}: k R1 = {:.3} is outside the validity window k R1 < 0.1",
                        k * len.range_r1
                    );
                }
                sigma.push(vec![num(k), num(s), num(len.a0), num(k * len.range_r1), ok.to_string()]);
            }
            out.push(NamedTable {
                file: "cross_section.csv".into(),
                table: sigma,
            });
        }
        Err(e) => log::warn!("no cross-section table at a1 = {a1}: {e}"),
    }
    Ok(out)
}

pub fn run_resonances(cfg: &RunConfig, hash: &str, dir: &Path, n_max: u32) -> Result<Vec<PathBuf>, CliError> {
    write_all(&resonance_tables(cfg, hash, n_max)?, dir)
}

pub const DEFAULT_WAVEFUNCTION_N_MAX: u32 = 10;

/// Numerov levels of the unified potential on `[r_inner, R1]` with their
/// eigenfunctions, and the light-particle field of each p-wave branch.
pub fn wavefunction_tables(cfg: &RunConfig, hash: &str, n_max: u32) -> Result<Vec<NamedTable>, CliError> {
    let nu0 = cfg.masses.nu0;
    let r1 = range_r1(cfg.twobody.a1())
        .ok()
        .filter(|r| r.is_finite())
        .ok_or_else(|| {
            CliError::Config(format!(
                "a1 = {}: the radial window needs a finite R1",
                cfg.twobody.a1()
            ))
        })?;
    let window = (cfg.wkb.r_inner, r1);
    let h = cfg.numerov_step;
    let levels = bound_states_numerov(&UnifiedPotential, nu0, window, n_max as usize, h)
        .map_err(|e| CliError::Solver(e.to_string()))?;

    let mut columns = vec!["k", "E_k", "nodes"];
    if cfg.physical.is_some() {
        columns.push("E_hartree");
    }
    let mut eig = Table::new("wavefunction", hash, &columns);
    let mut out = Vec::new();
    for (k, (&e, &nodes)) in levels.energies.iter().zip(&levels.nodes).enumerate() {
        let mut row = vec![k.to_string(), num(e), nodes.to_string()];
        if let Some(units) = cfg.physical {
            row.push(num(units.hartree(e)));
        }
        eig.push(row);
        let wf = bound_state_wavefunction(&UnifiedPotential, nu0, window, e, h)
            .map_err(|err| CliError::Solver(err.to_string()))?;
        let mut chi = Table::new("wavefunction", hash, &["x", "R", "chi"]);
        for (&x, &v) in wf.grid.iter().zip(&wf.values) {
            chi.push(vec![num(x), num(x.exp()), num(v)]);
        }
        out.push(NamedTable {
            file: format!("radial_k{k}.csv"),
            table: chi,
        });
    }
    out.insert(
        0,
        NamedTable {
            file: "eigenvalues.csv".into(),
            table: eig,
        },
    );

    let f = cfg.field;
    let axis: Vec<f64> = planar3b_core::roots::linear_grid(-f.half_width, f.half_width, f.points);
    let grid: Vec<(f64, f64)> = axis.iter().flat_map(|&y| axis.iter().map(move |&x| (x, y))).collect();
    let opts = ScanOptions::default();
    for (wave, sign, stem) in [
        (WaveBranch::I, Sign::Plus, "I_plus"),
        (WaveBranch::I, Sign::Minus, "I_minus"),
        (WaveBranch::II, Sign::Plus, "II_plus"),
        (WaveBranch::II, Sign::Minus, "II_minus"),
    ] {
        let root = match wave {
            WaveBranch::I => solve_pwave_i(f.separation, &cfg.twobody, sign, &opts),
            WaveBranch::II => solve_pwave_ii(f.separation, &cfg.twobody, sign, &opts),
        };
        let root = match root {
            Ok(root) => root,
            Err(e) => {
                log::warn!("no {stem} field at R = {}: {e}", f.separation);
                continue;
            }
        };
        let psi = light_wavefunction(wave, sign, root.xi, f.separation, &cfg.twobody, &grid)
            .map_err(|e| CliError::Solver(e.to_string()))?;
        let mut table = Table::new("wavefunction", hash, &["x", "y", "psi"]);
        for (&(x, y), v) in grid.iter().zip(&psi) {
            table.push(vec![num(x), num(y), opt(*v)]);
        }
        out.push(NamedTable {
            file: format!("light_{stem}.csv"),
            table,
        });
    }
    Ok(out)
}

pub fn run_wavefunction(cfg: &RunConfig, hash: &str, dir: &Path, n_max: u32) -> Result<Vec<PathBuf>, CliError> {
    write_all(&wavefunction_tables(cfg, hash, n_max)?, dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::ParsedCsv;

    fn parse(t: &Table) -> ParsedCsv {
        ParsedCsv::parse(std::str::from_utf8(&t.to_bytes().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn branch_lists() {
        assert_eq!(parse_branches(None).unwrap().len(), 9);
        assert_eq!(
            parse_branches(Some("s+, II-,s+")).unwrap(),
            vec![Branch::SWavePlus, Branch::PWaveIIMinus]
        );
        assert!(matches!(parse_branches(Some("s+,x")), Err(CliError::Config(_))));
    }

    #[test]
    fn swave_minus_rows_are_empty_below_a0() {
        let mut cfg = RunConfig::default();
        cfg.sweep.points = 20;
        let t = potentials_tables(&cfg, "h", &[Branch::SWaveMinus]).remove(0);
        let csv = parse(&t.named.table);
        let r = csv.column("R").unwrap();
        let v = csv.column("V").unwrap();
        let conv = csv.column_index("converged").unwrap();
        for (i, (r, v)) in r.iter().zip(&v).enumerate() {
            let below = r.unwrap() < cfg.twobody.a0;
            assert_eq!(v.is_none(), below);
            assert_eq!(csv.rows[i][conv] == "false", below);
        }
        assert!(t.failure_rate > 0.0 && t.failure_rate < 0.5);
    }

    #[test]
    fn spectrum_ratio_column_matches_law_in_closed_form() {
        let cfg = RunConfig::default();
        let tables = spectrum_tables(&cfg, "h", 12).unwrap();
        assert_eq!(tables.len(), cfg.spectrum_mass_ratios.len() + 1);
        for t in &tables[..3] {
            let csv = parse(&t.table);
            let ratio = csv.column("ratio").unwrap();
            let law = csv.column("ratio_law").unwrap();
            assert_eq!(ratio.last().unwrap(), &None);
            for (a, b) in ratio
                .iter()
                .zip(&law)
                .filter_map(|(a, b)| Some((a.as_ref()?, b.as_ref()?)))
            {
                assert!((a / b - 1.0).abs() < 1e-9);
            }
        }
        assert!(spectrum_tables(&cfg, "h", 2).is_err());
    }

    #[test]
    fn resonance_table_rows() {
        let cfg = RunConfig::default();
        let tables = resonance_tables(&cfg, "h", 5).unwrap();
        assert_eq!(tables[0].table.len(), 5);
        assert_eq!(tables[1].table.len(), cfg.scattering_k.len());
    }

    #[test]
    fn wavefunction_levels_and_fields() {
        let mut cfg = RunConfig::default();
        cfg.field.points = 11;
        let tables = wavefunction_tables(&cfg, "h", 10).unwrap();
        let eig = parse(&tables[0].table);
        let nodes = eig.column("nodes").unwrap();
        assert!(!nodes.is_empty());
        for (k, n) in nodes.iter().enumerate() {
            assert_eq!(n.unwrap() as usize, k);
        }
        assert!(tables.iter().any(|t| t.file == "light_I_plus.csv"));
    }

    #[test]
    fn resonant_config_has_no_radial_window() {
        let mut cfg = RunConfig::default();
        cfg.twobody.a1_inv = 0.0;
        assert!(matches!(wavefunction_tables(&cfg, "h", 3), Err(CliError::Config(_))));
    }
}
