use planar3b_core::specfun::{bessel_j, bessel_k, bessel_y};

const TABLE: &str = include_str!("../data/bessel_reference.csv");

fn rows() -> impl Iterator<Item = (char, u32, f64, f64)> {
    TABLE.lines().skip(1).map(|line| {
        let f: Vec<&str> = line.split(',').collect();
        (
            f[0].chars().next().unwrap(),
            f[1].parse().unwrap(),
            f[2].parse().unwrap(),
            f[3].parse().unwrap(),
        )
    })
}

#[test]
fn table_has_fifty_points_per_function() {
    let mut counts = std::collections::BTreeMap::new();
    for (kind, order, _, _) in rows() {
        *counts.entry((kind, order)).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 7);
    assert!(counts.values().all(|&c| c == 50));
}

#[test]
fn agrees_with_reference_table() {
    let mut worst = std::collections::BTreeMap::new();
    for (kind, order, x, expected) in rows() {
        let got = match kind {
            'K' => bessel_k(order, x),
            'J' => bessel_j(order, x),
            'Y' => bessel_y(order, x),
            _ => unreachable!(),
        }
        .unwrap();
        let rel = ((got - expected) / expected).abs();
        let entry = worst.entry((kind, order)).or_insert((0.0_f64, 0.0));
        if rel > entry.0 {
            *entry = (rel, x);
        }
    }
    for ((kind, order), (rel, x)) in &worst {
        println!("{kind}{order}: worst rel err {rel:.2e} at x = {x:.6e}");
        assert!(*rel <= 1e-10, "{kind}{order} at x = {x}: {rel:e}");
    }
}
