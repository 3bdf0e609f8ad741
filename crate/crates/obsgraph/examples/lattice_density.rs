//! Thickness and window-density profiles of integer sets, and the
//! equidistribution probe behind the rotation constructions.
//!
//! Run with: cargo run --release --example lattice_density

use obsgraph::bohr::BohrSet;
use obsgraph::density::{self, Scan, SetOracle, WeylArc};
use std::f64::consts::{PI, SQRT_2};

fn main() {
    // The even integers sit exactly at the thickness borderline: every
    // window ratio is L/(2L+1) < 1/2, and the supremum 1/2 is not attained.
    let two_z = SetOracle::Periodic(BohrSet::new(2, [0]).unwrap());
    println!("thickness profile of the even integers:");
    for c in density::thickness_profile(&two_z, &[1, 2, 5, 20, 100], &Scan::Auto) {
        println!(
            "  L = {:>3}: gamma = {:.6}  (L/(2L+1) = {:.6}, exact = {})",
            c.half_window,
            c.gamma,
            c.half_window as f64 / (2 * c.half_window + 1) as f64,
            c.exact
        );
    }

    println!("\nwindow-density profiles:");
    for (name, set) in [
        ("evens", two_z.clone()),
        (
            "{0,1} mod 4",
            SetOracle::Periodic(BohrSet::new(4, [0, 1]).unwrap()),
        ),
        (
            "rotation(sqrt2, 0.3)",
            SetOracle::Rotation {
                alpha: SQRT_2,
                gamma: 0.3,
            },
        ),
    ] {
        let scan = match set {
            SetOracle::Rotation { .. } => Scan::Random {
                count: 256,
                span: 1_000_000,
                seed: 11,
            },
            _ => Scan::Auto,
        };
        let est = density::beurling_estimate(&set, &[1_000, 10_000, 100_000], &scan);
        println!("  {name}:");
        for row in &est.rows {
            println!(
                "    R = {:>7}: [{:.5}, {:.5}]",
                row.radius, row.lower, row.upper
            );
        }
    }

    // Birkhoff averages of an arc indicator along the rotation by √2
    // converge to the arc measure uniformly in the starting point.
    println!("\nequidistribution probe (α = √2, arc of measure 0.6):");
    let arc = WeylArc {
        start: PI - 0.6 * PI,
        length: 1.2 * PI,
    };
    let starts = density::default_starts(32, 1_000_000, 3);
    for row in density::weyl_probe(SQRT_2, arc, &[1_000, 10_000, 100_000], &starts) {
        println!(
            "  M = {:>7}: sup deviation over starts = {:.5}",
            row.window, row.max_deviation
        );
    }
}
