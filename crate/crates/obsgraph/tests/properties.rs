//! Property tests over randomized structures.

use nalgebra::DVector;
use proptest::prelude::*;

use obsgraph::graph::{self, GraphSpec, VertexSet};
use obsgraph::obs::osc_integral;
use obsgraph::spectral::{self, C64};

fn arb_graph() -> impl Strategy<Value = GraphSpec> {
    (2usize..12, any::<u64>()).prop_map(|(n, seed)| graph::random_graph(n, 0.5, seed).unwrap())
}

fn arb_state(n: usize) -> impl Strategy<Value = DVector<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_map(|v| DVector::from_iterator(v.len(), v.into_iter().map(|(a, b)| C64::new(a, b))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_conserves_l2_and_composes(
        (g, u0, s, t) in arb_graph().prop_flat_map(|g| {
            let n = g.n;
            (Just(g), arb_state(n), -4.0f64..4.0, -4.0f64..4.0)
        })
    ) {
        let l = graph::laplacian(&g);
        let dec = spectral::eigendecompose_real(&l.matrix).unwrap();
        let ut = spectral::evolve(&dec, &u0, t);
        prop_assert!((ut.norm() - u0.norm()).abs() < 1e-10);
        let chained = spectral::evolve(&dec, &spectral::evolve(&dec, &u0, s), t);
        let direct = spectral::evolve(&dec, &u0, s + t);
        prop_assert!((chained - direct).norm() < 1e-9);
    }

    #[test]
    fn laplacian_rows_sum_to_zero_and_form_is_psd(g in arb_graph()) {
        let l = graph::laplacian(&g);
        for i in 0..g.n {
            let row: f64 = (0..g.n).map(|j| l.matrix[(i, j)]).sum();
            prop_assert_eq!(row, 0.0);
        }
        let dec = spectral::eigendecompose_real(&l.matrix).unwrap();
        prop_assert!(dec.eigenvalues()[g.n - 1] <= 1e-10, "Laplacian is negative semidefinite");
    }

    #[test]
    fn graph_json_round_trips(g in arb_graph()) {
        let back = GraphSpec::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn oscillatory_integral_bounds(delta in -50.0f64..50.0, t in 0.01f64..20.0) {
        let i = osc_integral(delta, t, 1e-12);
        prop_assert!(i.norm() <= t + 1e-12, "|I(δ,T)| ≤ T");
        let conj = osc_integral(-delta, t, 1e-12);
        prop_assert_eq!(i.conj(), conj, "I(−δ) = conj I(δ) exactly");
    }

    #[test]
    fn complement_partitions_vertices(
        (n, picks) in (1usize..40).prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n)))
    ) {
        let mut s = VertexSet::empty(n);
        for (v, take) in picks.iter().enumerate() {
            if *take { s.insert(v); }
        }
        let c = s.complement();
        prop_assert_eq!(s.card() + c.card(), n);
        for v in 0..n {
            prop_assert!(s.contains(v) != c.contains(v));
        }
    }

    #[test]
    fn fiber_spectrum_stays_in_band(p in 1u64..16, x in -3.15f64..3.15) {
        let fs = obsgraph::bohr::fiber_matrix(p, x);
        for &mu in fs.mu() {
            prop_assert!((-1e-12..=4.0 + 1e-12).contains(&mu), "μ_s ∈ [0, 4]");
        }
    }
}
