//! Thickness and Beurling-density estimation for subsets of ℤ given through
//! membership oracles.
//!
//! A set is `γ`-thick at half-window `L` when every window
//! `Q_L(x) = [x−L, x+L]` holds at least a `γ` fraction of its `2L+1`
//! integers. Beurling densities take window ratios with denominator `2R`
//! and pass to the limit; here they are profiled at finite radii. For
//! periodic sets a scan of one full period of centers makes both
//! certificates exact.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bohr::{BohrSet, MixedDensitySet};
use crate::numeric::frac_mul;

/// Membership oracle for a subset of ℤ.
#[derive(Clone, Debug)]
pub enum SetOracle {
    /// The periodic set `⋃_{s∈R}(pℤ + s)`.
    Periodic(BohrSet),
    /// Even integers whose rotation orbit lands in a centered interval:
    /// `{n ∈ 2ℤ : {nα} ∈ (1/2 − γ, 1/2 + γ)}`.
    Rotation { alpha: f64, gamma: f64 },
    /// Explicit finite window of members.
    Window(BTreeSet<i64>),
    /// Observable filled construction of prescribed density.
    Mixed(MixedDensitySet),
}

impl SetOracle {
    pub fn contains(&self, n: i64) -> bool {
        match self {
            SetOracle::Periodic(b) => b.contains(n),
            SetOracle::Rotation { alpha, gamma } => {
                n % 2 == 0 && {
                    let f = frac_mul(n, *alpha);
                    f > 0.5 - gamma && f < 0.5 + gamma
                }
            }
            SetOracle::Window(members) => members.contains(&n),
            SetOracle::Mixed(m) => m.contains(n),
        }
    }

    /// Exact period, when the set has one.
    pub fn period(&self) -> Option<u64> {
        match self {
            SetOracle::Periodic(b) => Some(b.p()),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SetOracle::Periodic(_) => "periodic",
            SetOracle::Rotation { .. } => "rotation",
            SetOracle::Window(_) => "explicit-window",
            SetOracle::Mixed(_) => "mixed",
        }
    }
}

/// Which integer centers a profile scans.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Scan {
    /// One full period for periodic sets (exact); otherwise the seeded
    /// random default.
    Auto,
    /// Explicit centers.
    Centers(Vec<i64>),
    /// `count` centers drawn uniformly from `[-span, span]` by a seeded
    /// generator.
    Random { count: usize, span: i64, seed: u64 },
}

/// Default statistical scan for aperiodic oracles.
pub const DEFAULT_RANDOM_SCAN: Scan = Scan::Random {
    count: 10_000,
    span: 1_000_000,
    seed: 0x5EED,
};

fn centers_for(set: &SetOracle, scan: &Scan) -> (Vec<i64>, bool) {
    match scan {
        Scan::Auto => match set.period() {
            Some(p) => ((0..p as i64).collect(), true),
            None => centers_for(set, &DEFAULT_RANDOM_SCAN),
        },
        Scan::Centers(cs) => (
            cs.clone(),
            set.period().is_some_and(|p| cs.len() as u64 >= p),
        ),
        Scan::Random { count, span, seed } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
            let cs = (0..*count).map(|_| rng.gen_range(-span..=*span)).collect();
            (cs, false)
        }
    }
}

/// `|E ∩ [x−w, x+w]|` by direct counting, with a periodicity shortcut.
fn count_window(set: &SetOracle, x: i64, w: i64) -> u64 {
    debug_assert!(w >= 0);
    if let SetOracle::Periodic(b) = set {
        let p = b.p() as i64;
        let len = 2 * w + 1;
        let full = len / p;
        let rem = len % p;
        let mut count = full as u64 * b.residues().len() as u64;
        let start = x - w + full * p;
        for n in start..start + rem {
            if b.contains(n) {
                count += 1;
            }
        }
        return count;
    }
    (x - w..=x + w).filter(|&n| set.contains(n)).count() as u64
}

/// Exact or scanned minimum window ratio at one half-window `L`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThicknessCertificate {
    pub half_window: i64,
    /// `min_x |E ∩ Q_L(x)| / (2L+1)` over the scanned centers.
    pub gamma: f64,
    /// `max_x |E ∩ Q_L(x)| / (2L+1)` over the scanned centers.
    pub gamma_max: f64,
    pub worst_center: i64,
    /// True when the scan covered a full period, making the minimum exact.
    pub exact: bool,
}

/// Thickness profile over a list of half-windows.
pub fn thickness_profile(
    set: &SetOracle,
    half_windows: &[i64],
    scan: &Scan,
) -> Vec<ThicknessCertificate> {
    let (centers, exact) = centers_for(set, scan);
    half_windows
        .iter()
        .map(|&l| {
            assert!(l >= 1, "half-window must be positive");
            let denom = (2 * l + 1) as f64;
            let counts: Vec<(i64, u64)> = centers
                .par_iter()
                .map(|&x| (x, count_window(set, x, l)))
                .collect();
            let (worst_center, min_count) = counts
                .iter()
                .copied()
                .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
                .expect("at least one center");
            let max_count = counts.iter().map(|&(_, c)| c).max().unwrap();
            ThicknessCertificate {
                half_window: l,
                gamma: min_count as f64 / denom,
                gamma_max: max_count as f64 / denom,
                worst_center,
                exact,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityRow {
    pub radius: i64,
    /// `inf_x |E ∩ [x−R, x+R]| / (2R)` over the scanned centers.
    pub lower: f64,
    /// `sup_x` of the same ratio.
    pub upper: f64,
}

/// Window-ratio profiles approaching the lower/upper Beurling densities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub rows: Vec<DensityRow>,
    /// Profile values at the largest radius.
    pub d_minus: f64,
    pub d_plus: f64,
}

pub fn beurling_estimate(set: &SetOracle, radii: &[i64], scan: &Scan) -> DensityEstimate {
    assert!(!radii.is_empty(), "need at least one radius");
    let (centers, _) = centers_for(set, scan);
    let rows: Vec<DensityRow> = radii
        .iter()
        .map(|&r| {
            assert!(r >= 1, "radius must be positive");
            let counts: Vec<u64> = centers
                .par_iter()
                .map(|&x| count_window(set, x, r))
                .collect();
            let denom = (2 * r) as f64;
            DensityRow {
                radius: r,
                lower: *counts.iter().min().unwrap() as f64 / denom,
                upper: *counts.iter().max().unwrap() as f64 / denom,
            }
        })
        .collect();
    let last = rows.last().unwrap();
    DensityEstimate {
        d_minus: last.lower,
        d_plus: last.upper,
        rows,
    }
}

/// An arc of the circle, parametrized by start angle and length (radians);
/// membership wraps modulo 2π.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WeylArc {
    pub start: f64,
    pub length: f64,
}

impl WeylArc {
    pub fn contains(&self, theta: f64) -> bool {
        (theta - self.start).rem_euclid(std::f64::consts::TAU) < self.length
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeylRow {
    pub window: i64,
    /// `sup_s |M⁻¹ Σ_{n=s}^{s+M−1} 1_arc(2π{nα}) − |arc|/2π|`.
    pub max_deviation: f64,
}

/// Equidistribution probe: Birkhoff averages of an arc indicator along the
/// rotation by `α`, compared with the arc measure, uniformly over the
/// sampled starting points. For irrational `α` the deviation decays as the
/// window grows.
pub fn weyl_probe(alpha: f64, arc: WeylArc, windows: &[i64], starts: &[i64]) -> Vec<WeylRow> {
    let target = arc.length / std::f64::consts::TAU;
    windows
        .iter()
        .map(|&m| {
            assert!(m >= 1);
            let max_deviation = starts
                .par_iter()
                .map(|&s| {
                    let hits = (s..s + m)
                        .filter(|&n| arc.contains(std::f64::consts::TAU * frac_mul(n, alpha)))
                        .count();
                    (hits as f64 / m as f64 - target).abs()
                })
                .reduce(|| 0.0, f64::max);
            WeylRow {
                window: m,
                max_deviation,
            }
        })
        .collect()
}

/// Deterministic starting points for [`weyl_probe`].
pub fn default_starts(count: usize, span: i64, seed: u64) -> Vec<i64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![0];
    starts.extend((1..count).map(|_| rng.gen_range(-span..=span)));
    starts
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    fn periodic(p: u64, rs: &[u64]) -> SetOracle {
        SetOracle::Periodic(BohrSet::new(p, rs.iter().copied()).unwrap())
    }

    #[test]
    fn thickness_two_z_at_l5() {
        // Odd-centered windows hold L evens out of 2L+1.
        let certs = thickness_profile(&periodic(2, &[0]), &[5], &Scan::Auto);
        assert_eq!(certs[0].gamma, 5.0 / 11.0);
        assert!(certs[0].exact);
    }

    #[test]
    fn thickness_full_line() {
        let certs = thickness_profile(&periodic(1, &[0]), &[1, 4, 9], &Scan::Auto);
        for c in certs {
            assert_eq!(c.gamma, 1.0);
        }
    }

    #[test]
    fn thickness_residue_pair_mod_4() {
        // Centers 2 and 3 see only two members in a 5-window.
        let certs = thickness_profile(&periodic(4, &[0, 1]), &[2], &Scan::Auto);
        assert_eq!(certs[0].gamma, 2.0 / 5.0);
    }

    #[test]
    fn two_z_borderline_thickness() {
        let ls: Vec<i64> = (1..=100).collect();
        let certs = thickness_profile(&periodic(2, &[0]), &ls, &Scan::Auto);
        for c in &certs {
            let l = c.half_window as f64;
            assert_eq!(c.gamma, l / (2.0 * l + 1.0));
            assert!(c.gamma < 0.5);
            assert!(c.gamma >= 0.5 - 1.0 / (2.0 * l + 1.0));
        }
    }

    #[test]
    fn beurling_two_z() {
        let est = beurling_estimate(&periodic(2, &[0]), &[1000], &Scan::Auto);
        assert!((est.d_minus - 0.5).abs() <= 1e-3);
        assert!((est.d_plus - 0.5).abs() <= 1e-3);
    }

    #[test]
    fn beurling_periodic_converges_to_density() {
        let set = periodic(4, &[0, 1]);
        let est = beurling_estimate(&set, &[100, 1000, 10_000], &Scan::Auto);
        for row in &est.rows {
            let err = 4.0 / (2.0 * row.radius as f64);
            assert!((row.lower - 0.5).abs() <= err);
            assert!((row.upper - 0.5).abs() <= err);
            assert!(row.lower <= row.upper);
            assert!(row.upper <= 1.0 + 1.0 / (2.0 * row.radius as f64));
        }
    }

    #[test]
    fn beurling_empty_window_set() {
        let est = beurling_estimate(
            &SetOracle::Window(BTreeSet::new()),
            &[10, 100],
            &Scan::Centers(vec![-5, 0, 5]),
        );
        assert_eq!(est.d_minus, 0.0);
        assert_eq!(est.d_plus, 0.0);
    }

    #[test]
    fn rotation_set_density() {
        // Membership on 2ℤ with an interval of length 2γ gives density γ.
        let set = SetOracle::Rotation {
            alpha: SQRT_2,
            gamma: 0.3,
        };
        let scan = Scan::Random {
            count: 64,
            span: 100_000,
            seed: 1,
        };
        let est = beurling_estimate(&set, &[100_000], &scan);
        assert!((est.d_minus - 0.3).abs() <= 0.02, "lower {}", est.d_minus);
        assert!((est.d_plus - 0.3).abs() <= 0.02, "upper {}", est.d_plus);
    }

    #[test]
    fn weyl_probe_full_circle() {
        let arc = WeylArc {
            start: -PI,
            length: std::f64::consts::TAU,
        };
        let rows = weyl_probe(SQRT_2, arc, &[100], &[0, 17]);
        assert_eq!(rows[0].max_deviation, 0.0);
    }

    #[test]
    fn weyl_probe_arc_at_1e5() {
        let arc = WeylArc {
            start: PI - 0.6 * PI,
            length: 1.2 * PI,
        };
        let starts = default_starts(16, 1_000_000, 7);
        let rows = weyl_probe(SQRT_2, arc, &[100_000], &starts);
        assert!(
            rows[0].max_deviation <= 0.01,
            "dev {}",
            rows[0].max_deviation
        );
    }

    #[test]
    fn weyl_probe_deviation_shrinks() {
        let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
        let arc = WeylArc {
            start: 0.3,
            length: 1.1,
        };
        let starts = default_starts(8, 100_000, 3);
        let rows = weyl_probe(golden, arc, &[1000, 10_000, 100_000], &starts);
        assert!(rows[0].max_deviation >= rows[2].max_deviation);
    }

    #[test]
    fn thickness_implies_density_for_periodic_sets() {
        // gamma_L ≤ lower-density profile + p/(2R) at large R.
        for (p, rs) in [
            (2u64, vec![0u64]),
            (4, vec![0, 1]),
            (6, vec![0, 2, 4]),
            (5, vec![1]),
        ] {
            let set = periodic(p, &rs);
            let thick = thickness_profile(&set, &[4, 16], &Scan::Auto);
            let dens = beurling_estimate(&set, &[10_000], &Scan::Auto);
            for c in &thick {
                assert!(
                    c.gamma <= dens.d_minus + p as f64 / (2.0 * 10_000.0) + 1e-12,
                    "p={p} rs={rs:?} L={}",
                    c.half_window
                );
            }
        }
    }

    #[test]
    fn density_implies_thickness_for_periodic_sets() {
        // For density γ and any γ' < γ some L achieves gamma_L ≥ γ'.
        for (p, rs) in [(2u64, vec![0u64]), (4, vec![0, 1]), (3, vec![0, 2])] {
            let set = periodic(p, &rs);
            let gamma = rs.len() as f64 / p as f64;
            let gamma_prime = gamma - 0.05;
            let ls: Vec<i64> = (1..=64).collect();
            let certs = thickness_profile(&set, &ls, &Scan::Auto);
            assert!(
                certs.iter().any(|c| c.gamma >= gamma_prime),
                "p={p} rs={rs:?}"
            );
        }
    }
}
