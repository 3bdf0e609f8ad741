//! Complements of small holes are observable: the time-averaged flow
//! conjugated with the hole projector has operator norm strictly below T,
//! and the gap T − λ_max is itself the observability constant's reciprocal.
//!
//! Run with: cargo run --release --example exterior_gap

use obsgraph::graph::{self, VertexSet};
use obsgraph::obs;
use obsgraph::spectral;

fn main() {
    let n = 101;
    let g = graph::cycle(n).unwrap();
    let (dec, groups) = spectral::decompose_laplacian(&graph::laplacian(&g)).unwrap();
    let t = 1.0;

    println!("cycle({n}), T = {t}: growing the hole E^c");
    println!(
        "{:>10} {:>14} {:>14} {:>14}",
        "|hole|", "λ_max", "gap T−λ_max", "C_obs(E)"
    );
    for hole_size in [0usize, 1, 2, 5, 10, 25, 50, 101] {
        let members: Vec<usize> = (0..hole_size).collect();
        let hole = VertexSet::from_indices(n, &members).unwrap();
        let ext = obs::exterior_average_norm(&dec, &groups, &hole, t).unwrap();
        assert!(ext.lambda_max <= t + 1e-9, "duality bound");
        println!(
            "{:>10} {:>14.8} {:>14.6e} {:>14}",
            hole_size,
            ext.lambda_max,
            ext.gap,
            ext.c_obs_complement
                .map_or("no strict gap".into(), |c| format!("{c:.4}")),
        );
    }

    println!("\nThe one-vertex hole keeps a healthy gap; as the hole approaches half");
    println!("the cycle the alternating-residue kernel closes it completely.");

    // Cross-check: the gap route and the direct Gramian on E give
    // consistent verdicts for a scattered hole.
    let hole = VertexSet::from_indices(n, &[3, 40, 77]).unwrap();
    let ext = obs::exterior_average_norm(&dec, &groups, &hole, t).unwrap();
    let e = hole.complement();
    let rep = obs::observability_constant(&obs::gramian(&dec, &groups, &e, t), &dec).unwrap();
    println!(
        "\nscattered 3-vertex hole: 1/(T−λ_max) = {:.4} vs direct C_obs = {:.4}",
        ext.c_obs_complement.unwrap(),
        rep.c_obs.unwrap()
    );
    assert!(rep.observable == ext.strict_gap);
}
