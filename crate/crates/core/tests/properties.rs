use planar3b_core::potentials::{
    solve_pwave_i, solve_pwave_ii, solve_swave, DetBlock, ScanOptions, Sign, UnifiedPotential,
};
use planar3b_core::radial::{numerov_integrate_q, DEFAULT_STEP_TOL};
use planar3b_core::scattering::{atom_molecule_a0, cross_section, ln_a1_resonance, peak_wave_number};
use planar3b_core::specfun::{bessel_k, k012, EXP_EULER_GAMMA};
use planar3b_core::twobody::TwoBodyParams;
use planar3b_core::wkb::{langer_phase, phi_correction, quantize_spectrum, WkbConfig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bessel_k_recurrence(x in 1e-3f64..50.0) {
        let [k0, k1, k2] = k012(x);
        let rhs = k0 + 2.0 * k1 / x;
        prop_assert!(((k2 - rhs) / k2).abs() < 1e-12);
        prop_assert!(k2 > k1 && k1 > k0 && k0 > 0.0);
    }

    #[test]
    fn bessel_k_decreasing(x in 1e-3f64..100.0, dx in 1e-3f64..1.0) {
        for order in 0..3 {
            prop_assert!(bessel_k(order, x + dx).unwrap() < bessel_k(order, x).unwrap());
        }
    }

    #[test]
    fn swave_root_satisfies_condition(r in 0.05f64..200.0) {
        let w = 2.0 * r / EXP_EULER_GAMMA;
        let root = solve_swave(r, Sign::Plus).unwrap();
        prop_assert!(root.converged);
        let resid = bessel_k(0, w * root.xi).unwrap() - root.xi.ln();
        prop_assert!(resid.abs() < 1e-10);
        prop_assert!(root.xi >= 1.0);
    }

    #[test]
    fn swave_minus_exists_only_beyond_a0(r in 0.05f64..50.0) {
        prop_assume!((r - 1.0).abs() > 1e-3);
        prop_assert_eq!(solve_swave(r, Sign::Minus).is_ok(), r > 1.0);
    }

    #[test]
    fn pwave_roots_zero_the_determinant(r in 1.5f64..60.0, a1_inv in 0.0f64..0.05) {
        let params = TwoBodyParams::new(10.0, a1_inv, 1.2).unwrap();
        let opts = ScanOptions::default();
        let cases = [
            (solve_pwave_i(r, &params, Sign::Plus, &opts), DetBlock::M0),
            (solve_pwave_i(r, &params, Sign::Minus, &opts), DetBlock::M0),
            (solve_pwave_ii(r, &params, Sign::Plus, &opts), DetBlock::MPlus),
            (solve_pwave_ii(r, &params, Sign::Minus, &opts), DetBlock::MMinus),
        ];
        for (root, block) in cases {
            if let Ok(root) = root {
                let det = root.determinant(r, &params, block).unwrap();
                prop_assert!(det.abs() < 1e-8, "{:?}: det {} at xi {}", block, det, root.xi);
            }
        }
    }

    #[test]
    fn phase_chain_identity(x in 0.5f64..20.0, gap in 0.1f64..30.0, nu0 in 1.0f64..500.0) {
        let x_eps = x + gap;
        let full = langer_phase(x, x_eps, nu0, &UnifiedPotential, 1e-12).unwrap();
        let phi = phi_correction(x, x_eps, nu0, 1e-12).unwrap();
        let free = 2.0 * nu0.sqrt() * (x_eps.sqrt() - x.sqrt());
        prop_assert!((full + phi - free).abs() < 1e-8 * free.max(1.0));
        prop_assert!(phi > 0.0);
    }

    #[test]
    fn closed_form_levels_ordered(nu0 in 5.0f64..400.0) {
        let s = quantize_spectrum(1..=8, nu0, &WkbConfig::default(), &UnifiedPotential).unwrap();
        prop_assert!(s.levels.iter().all(|l| l.e_n < 0.0));
        prop_assert!(s.levels.windows(2).all(|w| w[0].e_n < w[1].e_n && w[0].rho_n < w[1].rho_n));
    }

    #[test]
    fn cross_section_peak_in_k_sigma(a0 in 1e-2f64..1e4, f in 1.001f64..10.0) {
        let k = peak_wave_number(a0);
        let peak = k * cross_section(k, a0).unwrap();
        prop_assert!(peak >= (k * f) * cross_section(k * f, a0).unwrap());
        prop_assert!(peak >= (k / f) * cross_section(k / f, a0).unwrap());
    }

    #[test]
    fn cross_section_positive(k in 1e-8f64..1.0, a0 in 1e-2f64..1e6) {
        let s = cross_section(k, a0).unwrap();
        prop_assert!(s > 0.0 && s <= 4.0 / k * (1.0 + 1e-12));
    }

    #[test]
    fn resonance_spacing(n in 1u32..60, nu0 in 5.0f64..1000.0) {
        let gap = ln_a1_resonance(n + 1, nu0) - ln_a1_resonance(n, nu0);
        let expected = std::f64::consts::PI.powi(2) * (n as f64 + 1.0) / nu0;
        prop_assert!(((gap - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn a0_positive_between_resonances(n in 1u32..6, t in 0.05f64..0.95, nu0 in 5.0f64..60.0) {
        let lo = ln_a1_resonance(n, nu0);
        let hi = ln_a1_resonance(n + 1, nu0);
        let r = atom_molecule_a0((lo + t * (hi - lo)).exp(), nu0).unwrap();
        prop_assert!(r.a0.is_finite() && r.a0 > 0.0);
    }

    #[test]
    fn numerov_is_linear(scale in -1e3f64..1e3, c in 0.5f64..20.0) {
        prop_assume!(scale.abs() > 1e-6);
        let a = numerov_integrate_q(|x| c / x, 1.0, 1e-2, 500, (0.3, 0.31), DEFAULT_STEP_TOL).unwrap();
        let b = numerov_integrate_q(|x| c / x, 1.0, 1e-2, 500, (0.3 * scale, 0.31 * scale), DEFAULT_STEP_TOL).unwrap();
        let amp = a.values.iter().fold(1.0_f64, |m, u| m.max(u.abs()));
        for (u, v) in a.values.iter().zip(&b.values) {
            prop_assert!((u * scale - v).abs() <= 1e-10 * scale.abs() * amp);
        }
        prop_assert_eq!(a.node_count, b.node_count);
    }
}
