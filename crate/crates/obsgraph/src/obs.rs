//! Observability certificates on finite graphs.
//!
//! For the flow `∂_t u = iΔu` observed on a vertex set `E` over `[0, T]`,
//! the observed energy is a Hermitian quadratic form in the eigenbasis
//! coefficients: `∫_0^T ‖u(t)‖²_{l²(E)} dt = cᴴ G c` with
//! `G_{jk} = ⟨ψ_j|_E, ψ_k|_E⟩ · I(λ_k − λ_j, T)` and
//! `I(δ, T) = ∫_0^T e^{itδ} dt`. `E` is observable iff `G` is positive
//! definite; the observability constant is `1/μ_min(G)`. The eigenvector
//! restriction test is the time-free equivalent: `E` is observable iff no
//! Laplacian eigenvector vanishes identically on `E`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::spectral::{
    eigendecompose, eigendecompose_real, EigenspaceGrouping, SpectralDecomposition, C64,
};

/// Default near-kernel tolerance for block restriction matrices.
pub const TAU_RANK: f64 = 1e-8;

/// Default observable/unobservable threshold scale. A genuine kernel mode
/// leaves `mu_min` at eigensolver dust (≲ 1e−14·T), while on observable
/// sets `mu_min` decays like T³ as T → 0 and stays ≥ ~1e−10·T at the
/// shortest horizons exercised here; 1e−12·T separates the two with two
/// orders of margin on each side.
pub const TAU_OBS_SCALE: f64 = 1e-12;

/// Observable/unobservable threshold on the smallest Gramian eigenvalue.
/// Raw values are always reported so callers can re-threshold.
pub fn tau_obs(t: f64) -> f64 {
    TAU_OBS_SCALE * t
}

/// `∫_0^T e^{itδ} dt`, switching to the exact limit `T` when `|δ| ≤ tol` so
/// grouped eigenvalues never hit 0/0.
pub fn osc_integral(delta: f64, t: f64, tol: f64) -> C64 {
    if delta.abs() <= tol {
        C64::new(t, 0.0)
    } else {
        let td = t * delta;
        C64::new(td.sin() / delta, (1.0 - td.cos()) / delta)
    }
}

/// Rows of the eigenvector matrix restricted to an observation set
/// (`|E| × n`).
pub fn restricted_rows(dec: &SpectralDecomposition, set: &VertexSet) -> DMatrix<C64> {
    let idx = set.indices();
    DMatrix::from_fn(idx.len(), dec.n(), |i, k| dec.eigenvectors()[(idx[i], k)])
}

/// The observability Gramian at horizon `T`.
#[derive(Clone, Debug)]
pub struct Gramian {
    pub t: f64,
    pub matrix: DMatrix<C64>,
}

/// Assemble the Gramian of `(graph, E, T)` from a spectral decomposition.
pub fn gramian(
    dec: &SpectralDecomposition,
    groups: &EigenspaceGrouping,
    set: &VertexSet,
    t: f64,
) -> Gramian {
    assert!(t > 0.0, "time horizon must be positive");
    let n = dec.n();
    let b = restricted_rows(dec, set);
    let mut g = if set.is_empty() {
        DMatrix::zeros(n, n)
    } else {
        b.adjoint() * &b
    };
    let tol = groups.tolerance();
    let ev = dec.eigenvalues();
    for j in 0..n {
        for k in 0..n {
            g[(j, k)] *= osc_integral(ev[k] - ev[j], t, tol);
        }
    }
    Gramian { t, matrix: g }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gramian,
    Restriction,
}

/// Verdict plus certificate: either a positive lower bound (through
/// `mu_min`) or a witness vector that the flow keeps invisible on `E`.
#[derive(Clone, Debug)]
pub struct ObservabilityReport {
    pub observable: bool,
    /// Smallest Gramian eigenvalue (method `Gramian`, units of time) or the
    /// smallest block-restriction eigenvalue (method `Restriction`,
    /// dimensionless).
    pub mu_min: f64,
    /// `1/mu_min` when observable via the Gramian; `None` otherwise.
    pub c_obs: Option<f64>,
    /// Time horizon; `None` for the time-free restriction test.
    pub t: Option<f64>,
    /// Unit vector. For `Restriction` an eigenvector vanishing on `E`; for
    /// `Gramian` an initial state whose observed energy is `mu_min`.
    pub witness: Option<DVector<C64>>,
    pub method: Method,
}

/// Verdict from the smallest Gramian eigenvalue: observable iff
/// `mu_min > tau_obs`.
pub fn observability_constant(
    g: &Gramian,
    dec: &SpectralDecomposition,
) -> Result<ObservabilityReport> {
    observability_constant_with(g, dec, tau_obs(g.t))
}

/// Same as [`observability_constant`] with an explicit threshold.
pub fn observability_constant_with(
    g: &Gramian,
    dec: &SpectralDecomposition,
    tau: f64,
) -> Result<ObservabilityReport> {
    let gd = eigendecompose(&g.matrix)?;
    let mu_min = gd.eigenvalues()[0];
    let observable = mu_min > tau;
    let witness = if observable {
        None
    } else {
        let c = gd.eigenvector(0);
        let u0 = dec.reconstruct(&c);
        Some(normalized(u0))
    };
    Ok(ObservabilityReport {
        observable,
        mu_min,
        c_obs: observable.then(|| 1.0 / mu_min),
        t: Some(g.t),
        witness,
        method: Method::Gramian,
    })
}

fn normalized(v: DVector<C64>) -> DVector<C64> {
    let n = v.norm();
    if n > 0.0 {
        v / C64::new(n, 0.0)
    } else {
        v
    }
}

/// Eigenvector-restriction test: for each tolerance-grouped eigenspace with
/// orthonormal basis `B`, `E` sees the whole space iff the block matrix
/// `(B|_E)ᴴ(B|_E)` is nonsingular. A near-kernel (smallest eigenvalue
/// `≤ tau_rank`) yields a witness eigenvector vanishing on `E`; the witness
/// block is the one with the overall smallest eigenvalue, ties going to the
/// lowest block index.
pub fn restriction_test(
    dec: &SpectralDecomposition,
    groups: &EigenspaceGrouping,
    set: &VertexSet,
    tau_rank: f64,
) -> Result<ObservabilityReport> {
    if tau_rank <= 0.0 {
        return Err(Error::InvalidInput("tau_rank must be positive".into()));
    }
    let b = restricted_rows(dec, set);
    let mut best: Option<(f64, usize, DVector<C64>)> = None;
    for (bi, block) in groups.blocks().iter().enumerate() {
        let d_m = block.len();
        let (lam0, kernel) = if set.is_empty() {
            (0.0, unit_vector(d_m))
        } else {
            let sub = b.columns(block.start, d_m).into_owned();
            let m = sub.adjoint() * sub;
            let md = eigendecompose(&m)?;
            (md.eigenvalues()[0], md.eigenvector(0))
        };
        if best.as_ref().is_none_or(|(v, _, _)| lam0 < *v) {
            best = Some((lam0, bi, kernel));
        }
    }
    let (mu_min, block_idx, kernel) = best.expect("n >= 1 gives at least one block");
    let observable = mu_min > tau_rank;
    let witness = if observable {
        None
    } else {
        let block = &groups.blocks()[block_idx];
        let basis = dec
            .eigenvectors()
            .columns(block.start, block.len())
            .into_owned();
        Some(normalized(basis * kernel))
    };
    Ok(ObservabilityReport {
        observable,
        mu_min,
        c_obs: None,
        t: None,
        witness,
        method: Method::Restriction,
    })
}

fn unit_vector(n: usize) -> DVector<C64> {
    let mut v = DVector::zeros(n);
    v[0] = C64::new(1.0, 0.0);
    v
}

/// Norm of the time-averaged flow conjugated with the projection onto a
/// complement hole `E^c`; in finite dimension this is exactly
/// `λ_max(Gramian(E^c, T))`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExteriorAverage {
    pub t: f64,
    pub lambda_max: f64,
    /// `T − λ_max`; a strictly positive gap certifies observability of the
    /// complement with constant `1/gap`.
    pub gap: f64,
    pub strict_gap: bool,
    /// `1/(T − λ_max)` when the gap is strict.
    pub c_obs_complement: Option<f64>,
}

pub fn exterior_average_norm(
    dec: &SpectralDecomposition,
    groups: &EigenspaceGrouping,
    exterior: &VertexSet,
    t: f64,
) -> Result<ExteriorAverage> {
    let g = gramian(dec, groups, exterior, t);
    let gd = eigendecompose(&g.matrix)?;
    let lambda_max = gd.eigenvalues()[gd.n() - 1];
    let gap = t - lambda_max;
    let strict_gap = gap > tau_obs(t);
    Ok(ExteriorAverage {
        t,
        lambda_max,
        gap,
        strict_gap,
        c_obs_complement: strict_gap.then(|| 1.0 / gap),
    })
}

/// `‖G_E + G_{E^c} − T·Id‖_max`; the l² conservation law forces this to
/// vanish up to round-off.
pub fn complementarity_check(
    dec: &SpectralDecomposition,
    groups: &EigenspaceGrouping,
    set: &VertexSet,
    t: f64,
) -> f64 {
    let g_e = gramian(dec, groups, set, t);
    let g_c = gramian(dec, groups, &set.complement(), t);
    let n = dec.n();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            let id = if j == k {
                C64::new(t, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            worst = worst.max((g_e.matrix[(j, k)] + g_c.matrix[(j, k)] - id).norm());
        }
    }
    worst
}

/// Resolvent-style certificate: per grid point,
/// `q(λ) = λ_min(M(A − λ)² + m·diag(1_E))`. A uniform positive lower bound
/// over a grid containing the spectrum is equivalent to the restriction test
/// in finite dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HautusCertificate {
    pub lambda_grid: Vec<f64>,
    pub weight_state: f64,
    pub weight_obs: f64,
    pub q: Vec<f64>,
    pub q_min: f64,
    pub argmin: f64,
}

impl HautusCertificate {
    /// Numerical verdict at the default threshold `1e−8·m`.
    pub fn passes(&self) -> bool {
        self.q_min > 1e-8 * self.weight_obs
    }
}

pub fn hautus_sweep(
    a: &DMatrix<f64>,
    set: &VertexSet,
    weight_state: f64,
    weight_obs: f64,
    grid: &[f64],
) -> Result<HautusCertificate> {
    if weight_state <= 0.0 || weight_obs <= 0.0 {
        return Err(Error::InvalidInput(
            "Hautus weights must be positive".into(),
        ));
    }
    if grid.is_empty() {
        return Err(Error::InvalidInput("Hautus grid is empty".into()));
    }
    let n = a.nrows();
    let mut q = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] -= lambda;
        }
        let mut quad = &shifted * &shifted * weight_state;
        for v in set.iter() {
            quad[(v, v)] += weight_obs;
        }
        let dec = eigendecompose_real(&quad)?;
        // Clamp eigensolver dust: the operator is PSD by construction.
        q.push(dec.eigenvalues()[0].max(0.0));
    }
    let (arg, &q_min) = q
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.partial_cmp(y).unwrap())
        .expect("non-empty grid");
    Ok(HautusCertificate {
        lambda_grid: grid.to_vec(),
        weight_state,
        weight_obs,
        q,
        q_min,
        argmin: grid[arg],
    })
}

/// Uniform grid over `[λ_min − 1, λ_max + 1]` with the eigenvalues merged in,
/// so the sweep always probes the spectrum itself.
pub fn hautus_default_grid(dec: &SpectralDecomposition, points: usize) -> Vec<f64> {
    let lo = dec.eigenvalues()[0] - 1.0;
    let hi = dec.eigenvalues()[dec.n() - 1] + 1.0;
    let mut grid: Vec<f64> = (0..points.max(2))
        .map(|i| lo + (hi - lo) * i as f64 / (points.max(2) - 1) as f64)
        .collect();
    grid.extend(dec.eigenvalues().iter().copied());
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    grid
}
