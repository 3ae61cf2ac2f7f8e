"""Reference values for atom-molecule observables, evaluated with mpmath at 50 digits."""

import csv
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50


def cross_section(k, a0):
    log_term = mp.log(k * a0 * mp.exp(mp.euler) / 2)
    return (mp.pi**2 / k) / (mp.pi**2 / 4 + log_term**2)


def n_bound(a1, nu0):
    return mp.sqrt(2 * nu0 * mp.log(a1 / 2)) / mp.pi


def range_r1(a1):
    return mp.sqrt(a1 / 2 * mp.log(a1 / 2))


def a0_atom_molecule(a1, nu0):
    nb = n_bound(a1, nu0)
    return range_r1(a1) * mp.exp(-(mp.pi * nb * mp.tan(mp.pi * nb)) / (2 * nu0))


def a1_resonance(n, nu0):
    return 2 * mp.exp(mp.pi**2 * (n + mp.mpf(1) / 2) ** 2 / (2 * nu0))


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "crates/core/data/scattering_reference.csv"
    rows = [
        ("cross_section", "k=0.01;A0=14", cross_section(mp.mpf("0.01"), mp.mpf(14))),
        ("cross_section", "k=0.003;A0=250", cross_section(mp.mpf("0.003"), mp.mpf(250))),
        ("n_bound", "a1=100;nu0=20", n_bound(mp.mpf(100), mp.mpf(20))),
        ("a0_atom_molecule", "a1=100;nu0=20", a0_atom_molecule(mp.mpf(100), mp.mpf(20))),
        ("a0_atom_molecule", "a1=1000;nu0=50", a0_atom_molecule(mp.mpf(1000), mp.mpf(50))),
        ("a1_resonance", "n=5;nu0=100", a1_resonance(5, mp.mpf(100))),
        ("a1_resonance", "n=1;nu0=20", a1_resonance(1, mp.mpf(20))),
    ]
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["quantity", "args", "value"])
        for name, args, value in rows:
            w.writerow([name, args, mp.nstr(value, 20, min_fixed=-5, max_fixed=5)])


if __name__ == "__main__":
    main()
