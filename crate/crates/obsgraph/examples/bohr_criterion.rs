//! Periodic subsets of ℤ: the exact gcd criterion against the numerical
//! fiber sweep, plus the degenerate-fiber kernel table.
//!
//! Run with: cargo run --release --example bohr_criterion

use obsgraph::bohr::{self, BohrSet, DegenerateFiber};

fn main() {
    let cases: Vec<(u64, Vec<u64>)> = vec![
        (2, vec![0]),       // the even integers
        (4, vec![0, 1]),    // same density, observable
        (6, vec![0, 2, 4]), // differences all even
        (5, vec![0, 1, 2]), // dense and coprime
        (8, vec![0, 4]),    // g = 4
        (9, vec![0, 1]),    // consecutive residues are always enough
    ];

    println!(
        "{:<16} {:>4} {:>12} {:>14} {:>12}",
        "set", "g", "arithmetic", "m_T (grid 512)", "C_obs est."
    );
    for (p, residues) in &cases {
        let set = BohrSet::new(*p, residues.iter().copied()).unwrap();
        let v = bohr::m_t_sweep(&set, 1.0, 512).unwrap();
        assert!(v.methods_agree());
        println!(
            "{:<16} {:>4} {:>12} {:>14.6e} {:>12}",
            format!("{residues:?} mod {p}"),
            v.g,
            if v.observable { "observable" } else { "no" },
            v.m_t,
            v.c_obs_estimate.map_or("—".into(), |c| format!("{c:.2}")),
        );
    }

    // Where failure happens: the two degenerate fibers x ∈ {0, −π}, where
    // eigenvalues pair into 2-dimensional spaces span{e^{±irκ}}.
    println!("\ndegenerate-fiber kernels for {{0,2,4}} mod 6:");
    let set = BohrSet::new(6, [0, 2, 4]).unwrap();
    for fiber in [DegenerateFiber::Zero, DegenerateFiber::MinusPi] {
        for c in bohr::degenerate_kernel_test(&set, fiber) {
            println!(
                "  x = {:>7.4}, κ = {:>6.4} (m = {}): restriction {} (smallest eig {:.2e})",
                fiber.x(),
                c.kappa,
                c.m,
                if c.numeric_injective {
                    "injective"
                } else {
                    "has kernel"
                },
                c.restriction_min_eig,
            );
        }
    }

    // Any target density in (0,1) admits an observable set: base residues
    // {0..m−1} mod p topped up by a rotation filter.
    println!("\nobservable sets of prescribed density:");
    for q in [0.15, 0.4, 0.7, 0.9] {
        let mixed = bohr::mixed_density_construct(q, std::f64::consts::SQRT_2).unwrap();
        let measured = mixed.empirical_density(100_000);
        println!(
            "  target {q:.2}: base = first {} residues mod {}, fill θ = {:.3}, measured density {measured:.4}",
            mixed.base().residues().len(),
            mixed.base().p(),
            mixed.theta(),
        );
    }
}
