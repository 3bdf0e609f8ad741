//! Cross-method agreement harnesses: every observability verdict in this
//! crate can be computed along at least two independent routes, and the
//! batteries here run them side by side over randomized or exhaustive
//! instance families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bohr::{self, BohrSet, DegenerateFiber};
use crate::error::Result;
use crate::graph::{self, GraphSpec, VertexSet};
use crate::obs;
use crate::spectral::{self, EigenspaceGrouping, SpectralDecomposition, C64};

/// A random (graph, observation set, horizon) triple.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub graph: GraphSpec,
    pub set: VertexSet,
    pub t: f64,
}

/// Seeded instance family for verdict comparison: Erdős–Rényi graphs with
/// `2 ≤ n ≤ max_n`, horizons in `[0.5, 4]`, and observation sets of at
/// least `min(n, max(4, ⌈n/3⌉))` vertices.
///
/// The set-size floor keeps verdicts inside f64 resolution: on an
/// observable set of `e` vertices, initial states can cancel their observed
/// energy to Taylor order `k ≈ n/e`, so the smallest Gramian eigenvalue
/// behaves like `T^(2k+1)` for short horizons. With `e` very small it drops
/// below the `~1e−16·T` eigensolver dust of genuinely singular Gramians —
/// measured floors on this family: `≥ 1.8e−11` at `T = 0.1` and `≥ 3e−5` at
/// `T = 1`, against a dust ceiling below `5e−17`.
pub fn random_instances(count: usize, seed: u64, max_n: usize) -> Vec<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=max_n);
        let graph = graph::random_graph(n, 0.5, rng.gen()).expect("valid random graph");
        let mut set = VertexSet::empty(n);
        for v in 0..n {
            if rng.gen::<bool>() {
                set.insert(v);
            }
        }
        if set.card() < n.min(4.max(n.div_ceil(3))) {
            continue;
        }
        let t = rng.gen_range(0.5..4.0);
        out.push(RandomInstance { graph, set, t });
    }
    out
}

/// Unconditioned variant (any observation set, including empty); suitable
/// for identities that hold regardless of the verdict, like the
/// complementarity and monotonicity checks.
pub fn random_instances_any_set(count: usize, seed: u64, max_n: usize) -> Vec<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_n);
            let graph = graph::random_graph(n, 0.5, rng.gen()).expect("valid random graph");
            let mut set = VertexSet::empty(n);
            for v in 0..n {
                if rng.gen::<bool>() {
                    set.insert(v);
                }
            }
            let t = rng.gen_range(0.5..4.0);
            RandomInstance { graph, set, t }
        })
        .collect()
}

/// Independent rank oracle: Gaussian elimination with partial pivoting on
/// the restricted block basis, counting pivots above a relative threshold.
fn restricted_block_has_full_rank(
    dec: &SpectralDecomposition,
    groups: &EigenspaceGrouping,
    set: &VertexSet,
    block_idx: usize,
) -> bool {
    let block = &groups.blocks()[block_idx];
    let rows = set.card();
    let cols = block.len();
    if rows < cols {
        return false;
    }
    let mut m = obs::restricted_rows(dec, set)
        .columns(block.start, cols)
        .into_owned();
    // The basis columns are unit vectors, so entries are O(1) and an
    // absolute pivot threshold is meaningful.
    let mut rank = 0;
    for col in 0..cols {
        // Pivot search in the current column below `rank`.
        let (pivot_row, pivot_norm) = (rank..rows)
            .map(|r| (r, m[(r, col)].norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if pivot_norm <= 1e-8 {
            continue;
        }
        m.swap_rows(rank, pivot_row);
        let pivot = m[(rank, col)];
        for r in rank + 1..rows {
            let factor = m[(r, col)] / pivot;
            for c in col..cols {
                let sub = factor * m[(rank, c)];
                m[(r, c)] -= sub;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank == cols
}

/// All verdicts for one instance, each computed by an independent route.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceCheck {
    pub n: usize,
    pub t: f64,
    pub gramian_observable: bool,
    pub gramian_observable_short: bool,
    pub gramian_observable_long: bool,
    pub restriction_observable: bool,
    pub hautus_passes: bool,
    pub rank_oracle_observable: bool,
    pub complementarity_residual: f64,
    pub mu_min: f64,
}

impl InstanceCheck {
    pub fn all_agree(&self) -> bool {
        let v = self.gramian_observable;
        self.gramian_observable_short == v
            && self.gramian_observable_long == v
            && self.restriction_observable == v
            && self.hautus_passes == v
            && self.rank_oracle_observable == v
    }
}

pub fn check_instance(inst: &RandomInstance) -> Result<InstanceCheck> {
    let l = graph::laplacian(&inst.graph);
    let (dec, groups) = spectral::decompose_laplacian(&l)?;

    let verdict_at = |t: f64| -> Result<(bool, f64)> {
        let g = obs::gramian(&dec, &groups, &inst.set, t);
        let rep = obs::observability_constant(&g, &dec)?;
        // G is positive semidefinite and dominated by T·Id.
        assert!(rep.mu_min >= -1e-9 * t, "Gramian lost PSD: {}", rep.mu_min);
        assert!(
            rep.mu_min <= t + 1e-9 * t,
            "Gramian exceeded T·Id: {}",
            rep.mu_min
        );
        if let Some(c) = rep.c_obs {
            assert!(c >= 1.0 / t - 1e-9, "C_obs below the 1/T floor: {c}");
        }
        Ok((rep.observable, rep.mu_min))
    };
    let (gramian_observable, mu_min) = verdict_at(inst.t)?;
    let (gramian_observable_short, _) = verdict_at(0.1)?;
    let (gramian_observable_long, _) = verdict_at(10.0)?;

    let restriction = obs::restriction_test(&dec, &groups, &inst.set, obs::TAU_RANK)?;
    let grid = obs::hautus_default_grid(&dec, 64);
    let hautus = obs::hautus_sweep(&l.matrix, &inst.set, 1.0, 1.0, &grid)?;
    let rank_oracle_observable =
        (0..groups.len()).all(|b| restricted_block_has_full_rank(&dec, &groups, &inst.set, b));
    let complementarity_residual = obs::complementarity_check(&dec, &groups, &inst.set, inst.t);

    Ok(InstanceCheck {
        n: inst.graph.n,
        t: inst.t,
        gramian_observable,
        gramian_observable_short,
        gramian_observable_long,
        restriction_observable: restriction.observable,
        hautus_passes: hautus.passes(),
        rank_oracle_observable,
        complementarity_residual,
        mu_min,
    })
}

/// Summary of a randomized agreement battery.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AgreementSummary {
    pub instances: usize,
    pub disagreements: usize,
    pub max_complementarity_residual_rel: f64,
    /// `mu_min` is nondecreasing in T on every instance where it was swept.
    pub monotonicity_violations: usize,
}

/// Run [`check_instance`] over a seeded family plus a T-monotonicity sweep.
pub fn run_agreement_battery(count: usize, seed: u64, max_n: usize) -> Result<AgreementSummary> {
    let instances = random_instances(count, seed, max_n);
    let checks: Vec<(InstanceCheck, usize)> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let check = check_instance(inst)?;
            let l = graph::laplacian(&inst.graph);
            let (dec, groups) = spectral::decompose_laplacian(&l)?;
            // Monotonicity of mu_min over a doubling ladder of horizons.
            let mut last = f64::NEG_INFINITY;
            let mut violations = 0;
            for t in [0.5, 1.0, 2.0, 4.0] {
                let g = obs::gramian(&dec, &groups, &inst.set, t);
                let mu = spectral::eigendecompose(&g.matrix)?.eigenvalues()[0];
                if mu < last - 1e-9 {
                    violations += 1;
                }
                last = mu;
            }
            // Monotonicity in the set: enlarging E adds a PSD term.
            let mut grown = inst.set.clone();
            let extra = (i * 7 + 3) % inst.graph.n;
            grown.insert(extra);
            let g_small = obs::gramian(&dec, &groups, &inst.set, inst.t);
            let g_big = obs::gramian(&dec, &groups, &grown, inst.t);
            let diff = &g_big.matrix - &g_small.matrix;
            let min_gain = spectral::eigendecompose(&diff)?.eigenvalues()[0];
            if min_gain < -1e-9 * inst.t {
                violations += 1;
            }
            Ok((check, violations))
        })
        .collect::<Result<_>>()?;
    let disagreements = checks.iter().filter(|(c, _)| !c.all_agree()).count();
    let max_res = checks
        .iter()
        .map(|(c, _)| c.complementarity_residual / c.t)
        .fold(0.0f64, f64::max);
    let monotonicity_violations = checks.iter().map(|(_, v)| v).sum();
    Ok(AgreementSummary {
        instances: count,
        disagreements,
        max_complementarity_residual_rel: max_res,
        monotonicity_violations,
    })
}

/// Exhaustive periodic-set battery: for every modulus `p ≤ p_max` and every
/// nonempty residue set, the arithmetic criterion, the degenerate-fiber
/// kernel test, and the numerical sweep must return the same verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BohrExhaustiveSummary {
    pub p_max: u64,
    pub cases: usize,
    pub disagreements: usize,
}

pub fn bohr_exhaustive(p_max: u64, t: f64, grid: usize) -> Result<BohrExhaustiveSummary> {
    let mut case_list = Vec::new();
    for p in 1..=p_max {
        for mask in 1u64..(1 << p) {
            case_list.push((p, mask));
        }
    }
    let disagreements = case_list
        .par_iter()
        .map(|&(p, mask)| {
            let residues: Vec<u64> = (0..p).filter(|&r| mask >> r & 1 == 1).collect();
            let set = BohrSet::new(p, residues)?;
            let verdict = bohr::m_t_sweep(&set, t, grid)?;
            let degenerate_ok = [DegenerateFiber::Zero, DegenerateFiber::MinusPi]
                .into_iter()
                .all(|f| {
                    bohr::degenerate_kernel_test(&set, f)
                        .iter()
                        .all(|c| c.arithmetic_injective && c.numeric_injective)
                });
            let consistent = verdict.methods_agree() && degenerate_ok == verdict.observable;
            Ok(usize::from(!consistent))
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum();
    Ok(BohrExhaustiveSummary {
        p_max,
        cases: case_list.len(),
        disagreements,
    })
}

/// Fiber/cycle oracle over a fixed instance list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OraclePairSummary {
    pub p: u64,
    pub residues: Vec<u64>,
    pub cells: usize,
    pub verdicts_agree: bool,
    pub observable: bool,
    pub mu_min_rel_err: f64,
}

pub fn fiber_cycle_battery(
    pairs: &[(u64, Vec<u64>)],
    cells_list: &[usize],
    t: f64,
) -> Result<Vec<OraclePairSummary>> {
    let mut out = Vec::new();
    for (p, residues) in pairs {
        let set = BohrSet::new(*p, residues.iter().copied())?;
        for &cells in cells_list {
            let a = bohr::fiber_cycle_oracle(&set, cells, t)?;
            out.push(OraclePairSummary {
                p: *p,
                residues: residues.clone(),
                cells,
                verdicts_agree: a.verdicts_agree,
                observable: a.cycle_observable,
                mu_min_rel_err: a.mu_min_rel_err,
            });
        }
    }
    Ok(out)
}

/// Scale check: the Gramian quadratic form against direct time quadrature of
/// the observed energy, on seeded random initial states.
pub fn gramian_quadrature_check(inst: &RandomInstance, states: usize, seed: u64) -> Result<f64> {
    let l = graph::laplacian(&inst.graph);
    let (dec, groups) = spectral::decompose_laplacian(&l)?;
    let g = obs::gramian(&dec, &groups, &inst.set, inst.t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..states {
        let u0 = nalgebra::DVector::from_fn(inst.graph.n, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let c = dec.coefficients(&u0);
        let form = (c.adjoint() * &g.matrix * &c)[(0, 0)].re;
        let quad = crate::quad::composite_simpson(
            |s| {
                let u = spectral::evolve(&dec, &u0, s);
                inst.set.iter().map(|v| u[v].norm_sqr()).sum()
            },
            0.0,
            inst.t,
            2048,
        );
        worst = worst.max((form - quad).abs() / quad.abs().max(1e-12));
    }
    Ok(worst)
}
