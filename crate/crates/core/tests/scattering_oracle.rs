use planar3b_core::scattering::{atom_molecule_a0, cross_section, ln_a1_resonance};
use planar3b_core::wkb::count_bound_states;

const TABLE: &str = include_str!("../data/scattering_reference.csv");

fn arg(args: &str, key: &str) -> f64 {
    args.split(';')
        .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
        .unwrap_or_else(|| panic!("missing {key} in {args}"))
        .parse()
        .unwrap()
}

#[test]
fn observables_match_reference() {
    let mut seen = 0;
    for line in TABLE.lines().skip(1) {
        let mut cols = line.split(',');
        let (name, args, expected) = (cols.next().unwrap(), cols.next().unwrap(), cols.next().unwrap());
        let expected: f64 = expected.parse().unwrap();
        let got = match name {
            "cross_section" => cross_section(arg(args, "k"), arg(args, "A0")).unwrap(),
            "n_bound" => count_bound_states(arg(args, "a1"), arg(args, "nu0")).unwrap(),
            "a0_atom_molecule" => atom_molecule_a0(arg(args, "a1"), arg(args, "nu0")).unwrap().a0,
            "a1_resonance" => ln_a1_resonance(arg(args, "n") as u32, arg(args, "nu0")).exp(),
            other => panic!("unknown quantity {other}"),
        };
        let rel = ((got - expected) / expected).abs();
        assert!(rel < 1e-12, "{name}({args}): {got} vs {expected}, rel {rel:e}");
        seen += 1;
    }
    assert_eq!(seen, 7);
}
