//! Discrete-torus spectra and high-density unobservable sets.
//!
//! On `(ℤ/Nℤ)^d` the characters `φ_k(x) = e^{2πi⟨k,x⟩/N}` diagonalize the
//! Laplacian with eigenvalues `μ(k) = 2Σ_j cos(2πk_j/N) − 2d`. Products of
//! sines `Ψ_r(x) = Π_j sin(2πr_jx_j/N)` are eigenfunctions whose zero sets
//! are unions of coordinate slabs; choosing `r_j = N/4` (when `4 | N`) makes
//! the zero set cover all points with an even coordinate — a fraction
//! `1 − 2^{−d}` of the torus that no observation can see. Sine zeros are
//! decided in integer arithmetic (`sin(2πm/N) = 0 ⟺ N | 2m`), so zero sets
//! and support counts are exact.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, torus_coords, VertexSet};
use crate::numeric::gcd;
use crate::obs;
use crate::spectral::{self, C64};

/// Largest vertex count at which unobservability is certified through the
/// eigendecomposition; beyond it the explicit witness is checked directly.
pub const CERT_EIGEN_LIMIT: usize = 2000;

/// `sin(2πm/N)` with exact zeros: the argument is reduced modulo `2N` in
/// integers first, and the zero residues `{0, N}` return exactly `0.0`.
pub fn sin_two_pi_frac(m: u64, n_side: u64) -> f64 {
    let b = (2 * m) % (2 * n_side);
    if b == 0 || b == n_side {
        0.0
    } else {
        (std::f64::consts::PI * b as f64 / n_side as f64).sin()
    }
}

/// `μ(k) = 2Σ_j cos(2πk_j/N) − 2d`.
pub fn eigenvalue_of_frequency(n_side: u64, k: &[u64]) -> f64 {
    let n = n_side as f64;
    2.0 * k
        .iter()
        .map(|&kj| (std::f64::consts::TAU * (kj % n_side) as f64 / n).cos())
        .sum::<f64>()
        - 2.0 * k.len() as f64
}

/// Character value `φ_k(x) = e^{2πi⟨k,x⟩/N}` with the inner product reduced
/// modulo `N` first.
pub fn character_value(n_side: u64, k: &[u64], x: &[usize]) -> C64 {
    let dot = k.iter().zip(x).fold(0u64, |acc, (&kj, &xj)| {
        (acc + (kj % n_side) * (xj as u64 % n_side)) % n_side
    });
    C64::from_polar(1.0, std::f64::consts::TAU * dot as f64 / n_side as f64)
}

/// One torus character with its eigenvalue.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterData {
    pub k: Vec<u64>,
    pub eigenvalue: f64,
}

/// All `N^d` characters. Requires `N ≥ 2`.
pub fn torus_spectrum(n_side: u64, dim: usize) -> Result<Vec<CharacterData>> {
    if n_side < 2 {
        return Err(Error::InvalidInput("torus spectrum needs N >= 2".into()));
    }
    if dim == 0 {
        return Err(Error::InvalidInput("torus spectrum needs d >= 1".into()));
    }
    let total = (n_side as usize)
        .checked_pow(dim as u32)
        .filter(|&t| t <= 1 << 26)
        .ok_or_else(|| Error::InvalidInput("torus too large to enumerate".into()))?;
    let mut out = Vec::with_capacity(total);
    let mut k = vec![0u64; dim];
    for _ in 0..total {
        out.push(CharacterData {
            k: k.clone(),
            eigenvalue: eigenvalue_of_frequency(n_side, &k),
        });
        for j in (0..dim).rev() {
            k[j] += 1;
            if k[j] < n_side {
                break;
            }
            k[j] = 0;
        }
    }
    Ok(out)
}

/// Zero count of the sine eigenfunction `ψ_k^sin = sin(2π⟨k,x⟩/N)`, both by
/// the gcd closed form and by brute-force enumeration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroCountReport {
    pub n_side: u64,
    pub dim: usize,
    pub k: Vec<u64>,
    /// `gcd(k_1, …, k_d, N)`.
    pub d0: u64,
    /// `N / d0`, the size of the image of `x ↦ ⟨k,x⟩ mod N`.
    pub image_size: u64,
    /// Sine-zero residues lying in that image (`0`, plus `N/2` when present).
    pub zero_residues_in_image: Vec<u64>,
    /// `|S_sin ∩ Im| · d0 · N^{d−1}`.
    pub closed_form: u64,
    /// Enumerated count; `None` when `N^d` exceeds the brute-force limit.
    pub brute_force: Option<u64>,
}

impl ZeroCountReport {
    pub fn counts_match(&self) -> bool {
        self.brute_force.is_none_or(|b| b == self.closed_form)
    }
}

/// Brute-force cutoff for [`zero_count`].
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

pub fn zero_count(n_side: u64, dim: usize, k: &[u64]) -> Result<ZeroCountReport> {
    if n_side < 3 {
        return Err(Error::InvalidInput("zero count needs N >= 3".into()));
    }
    if k.len() != dim || dim == 0 {
        return Err(Error::InvalidInput("frequency dimension mismatch".into()));
    }
    let k: Vec<u64> = k.iter().map(|&kj| kj % n_side).collect();
    let d0 = k.iter().fold(n_side, |acc, &kj| gcd(acc, kj));
    let image_size = n_side / d0;
    // S_sin = {0} ∪ {N/2 when N even}; a residue r is in the image iff d0 | r.
    let mut zero_residues = vec![0u64];
    if n_side.is_multiple_of(2) && (n_side / 2).is_multiple_of(d0) {
        zero_residues.push(n_side / 2);
    }
    let closed_form = zero_residues.len() as u64 * d0 * n_side.pow(dim as u32 - 1);

    let total = n_side.pow(dim as u32);
    let brute_force = (total <= BRUTE_FORCE_LIMIT).then(|| {
        let mut x = vec![0u64; dim];
        let mut count = 0u64;
        for _ in 0..total {
            let dot = k
                .iter()
                .zip(&x)
                .fold(0u64, |acc, (&kj, &xj)| (acc + kj * xj) % n_side);
            // sin(2π·dot/N) = 0 ⟺ N | 2·dot
            if (2 * dot) % n_side == 0 {
                count += 1;
            }
            for j in (0..dim).rev() {
                x[j] += 1;
                if x[j] < n_side {
                    break;
                }
                x[j] = 0;
            }
        }
        count
    });
    Ok(ZeroCountReport {
        n_side,
        dim,
        k,
        d0,
        image_size,
        zero_residues_in_image: zero_residues,
        closed_form,
        brute_force,
    })
}

/// Smallest odd prime divisor of `n` (equal to `n` when `n` is an odd prime).
pub fn smallest_odd_prime_divisor(n: u64) -> Option<u64> {
    let mut m = n;
    while m.is_multiple_of(2) {
        m /= 2;
    }
    if m == 1 {
        return None;
    }
    let mut p = 3;
    while p * p <= m {
        if m.is_multiple_of(p) {
            return Some(p);
        }
        p += 2;
    }
    Some(m)
}

/// The product-eigenfunction construction: frequency `r`, the eigenfunction
/// values, and the unobservable slab union `E_prod` with exact cardinalities.
#[derive(Clone, Debug)]
pub struct TorusConstruction {
    pub n_side: u64,
    pub dim: usize,
    /// `r_j = N/4` when `4 | N`, else `N/p_min`.
    pub r: Vec<u64>,
    /// `Ψ_r(x) = Π_j sin(2πr_jx_j/N)`, indexed row-major.
    pub psi: Vec<f64>,
    /// `⋃_j {x : sin(2πr_jx_j/N) = 0}`.
    pub e_prod: VertexSet,
    /// Closed-form `|E_prod|`.
    pub e_size: u64,
    /// Exact support size of `Ψ_r` (complement of `E_prod`).
    pub support_size: u64,
    /// `μ(r)`, shared by every frequency `s∘r`.
    pub eigenvalue: f64,
    /// Spectral support `{s∘r mod N : s ∈ {±1}^d}`.
    pub spectral_support: Vec<Vec<u64>>,
}

impl TorusConstruction {
    pub fn vertex_count(&self) -> usize {
        (self.n_side as usize).pow(self.dim as u32)
    }

    pub fn density_ratio(&self) -> f64 {
        self.e_size as f64 / self.vertex_count() as f64
    }
}

/// Whether `sin(2πr·x/N) = 0`, decided in integers.
fn sine_factor_is_zero(n_side: u64, r: u64, x: u64) -> bool {
    (2 * r * x).is_multiple_of(n_side)
}

/// Count `|E_prod|` by plain enumeration of all `N^d` points.
pub fn enumerate_product_zero_set(n_side: u64, dim: usize, r: &[u64]) -> u64 {
    let total = n_side.pow(dim as u32);
    let mut x = vec![0u64; dim];
    let mut count = 0u64;
    for _ in 0..total {
        if r.iter()
            .zip(&x)
            .any(|(&rj, &xj)| sine_factor_is_zero(n_side, rj, xj))
        {
            count += 1;
        }
        for j in (0..dim).rev() {
            x[j] += 1;
            if x[j] < n_side {
                break;
            }
            x[j] = 0;
        }
    }
    count
}

/// Frequency rule of the construction.
pub fn product_frequency(n_side: u64) -> Result<u64> {
    if n_side < 3 {
        return Err(Error::InvalidInput(
            "product construction needs N >= 3".into(),
        ));
    }
    if n_side.is_multiple_of(4) {
        Ok(n_side / 4)
    } else {
        let p = smallest_odd_prime_divisor(n_side)
            .expect("every N >= 3 with 4 ∤ N has an odd prime divisor");
        Ok(n_side / p)
    }
}

/// Build the construction for `(N, d)`. `N = 2` is rejected: it is neither
/// divisible by 4 nor carries an odd prime divisor.
pub fn product_construction(n_side: u64, dim: usize) -> Result<TorusConstruction> {
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be >= 1".into()));
    }
    let rj = product_frequency(n_side)?;
    let r = vec![rj; dim];
    let total = (n_side as usize)
        .checked_pow(dim as u32)
        .filter(|&t| t <= 1 << 26)
        .ok_or_else(|| Error::InvalidInput("torus too large".into()))?;

    let e_size = if n_side.is_multiple_of(4) {
        n_side.pow(dim as u32) - (n_side / 2).pow(dim as u32)
    } else {
        let p = n_side / rj;
        n_side.pow(dim as u32) - (n_side - n_side / p).pow(dim as u32)
    };

    let mut psi = Vec::with_capacity(total);
    let mut e_prod = VertexSet::empty(total);
    let mut x = vec![0u64; dim];
    for v in 0..total {
        let mut value = 1.0;
        for (&rj, &xj) in r.iter().zip(&x) {
            value *= sin_two_pi_frac(rj * xj, n_side);
        }
        if value == 0.0 {
            e_prod.insert(v);
        }
        psi.push(value);
        for j in (0..dim).rev() {
            x[j] += 1;
            if x[j] < n_side {
                break;
            }
            x[j] = 0;
        }
    }
    let support_size = (total - e_prod.card()) as u64;

    let mut spectral_support: Vec<Vec<u64>> = Vec::with_capacity(1 << dim);
    for signs in 0..(1u32 << dim) {
        let freq: Vec<u64> = (0..dim)
            .map(|j| {
                if signs >> j & 1 == 1 {
                    (n_side - rj) % n_side
                } else {
                    rj
                }
            })
            .collect();
        if !spectral_support.contains(&freq) {
            spectral_support.push(freq);
        }
    }

    Ok(TorusConstruction {
        n_side,
        dim,
        r: r.clone(),
        psi,
        e_prod,
        e_size,
        support_size,
        eigenvalue: eigenvalue_of_frequency(n_side, &r),
        spectral_support,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertMethod {
    /// Independent eigendecomposition route: restriction test plus Gramian.
    Gramian,
    /// Direct witness route: `Ψ_r` vanishes on `E_prod` and is an
    /// eigenvector up to a 1e−9 relative residual.
    Witness,
}

/// Outcome of certifying that `E_prod` is unobservable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certification {
    pub method: CertMethod,
    pub verified: bool,
    /// Smallest Gramian eigenvalue at `T = 1` (Gramian route only).
    pub mu_min: Option<f64>,
    /// `‖ΔΨ_r − μ(r)Ψ_r‖ / ‖Ψ_r‖`.
    pub witness_residual: f64,
    /// Whether `Ψ_r`'s eigenspace component sits in the near-kernel of the
    /// block restriction matrix (Gramian route only).
    pub psi_in_restriction_kernel: Option<bool>,
}

/// Certify unobservability of the construction. Small tori (`N^d ≤ 2000`)
/// go through the finite-graph route (restriction test and Gramian at
/// `T = 1`), which must agree with the witness; large tori are certified by
/// the explicit witness alone.
pub fn certify_unobservable(c: &TorusConstruction) -> Result<Certification> {
    let g = graph::torus(c.n_side as usize, c.dim)?;
    let psi_c: Vec<C64> = c.psi.iter().map(|&v| C64::new(v, 0.0)).collect();
    let psi_vec = DVector::from_vec(psi_c.clone());
    let norm = psi_vec.norm();
    if norm == 0.0 {
        return Err(Error::ContractViolation(
            "product eigenfunction vanished".into(),
        ));
    }
    let lap_psi = DVector::from_vec(graph::laplacian_apply(&g, &psi_c));
    let witness_residual = (&lap_psi - &psi_vec * C64::new(c.eigenvalue, 0.0)).norm() / norm;
    let vanishes = c.e_prod.iter().all(|v| c.psi[v] == 0.0);

    if g.n > CERT_EIGEN_LIMIT {
        return Ok(Certification {
            method: CertMethod::Witness,
            verified: vanishes && witness_residual <= 1e-9,
            mu_min: None,
            witness_residual,
            psi_in_restriction_kernel: None,
        });
    }

    let (dec, groups) = spectral::decompose_laplacian(&graph::laplacian(&g))?;
    let restriction = obs::restriction_test(&dec, &groups, &c.e_prod, obs::TAU_RANK)?;
    let gram = obs::gramian(&dec, &groups, &c.e_prod, 1.0);
    let report = obs::observability_constant(&gram, &dec)?;

    // Ψ_r's coefficients in its eigenvalue block must lie in the kernel of
    // the block restriction matrix.
    let block_idx = groups
        .nearest_block(c.eigenvalue)
        .ok_or_else(|| Error::ContractViolation("empty grouping".into()))?;
    let block = &groups.blocks()[block_idx];
    let basis = dec
        .eigenvectors()
        .columns(block.start, block.len())
        .into_owned();
    let coeffs = basis.adjoint() * (&psi_vec / C64::new(norm, 0.0));
    let restricted = obs::restricted_rows(&dec, &c.e_prod);
    let block_rows = restricted.columns(block.start, block.len()).into_owned();
    let in_kernel = coeffs.norm() > 0.9 && (block_rows * &coeffs).norm() <= 1e-8;

    Ok(Certification {
        method: CertMethod::Gramian,
        verified: vanishes
            && witness_residual <= 1e-9
            && !restriction.observable
            && !report.observable
            && in_kernel,
        mu_min: Some(report.mu_min),
        witness_residual,
        psi_in_restriction_kernel: Some(in_kernel),
    })
}

/// One row of the density table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensitySequenceRow {
    pub n_side: u64,
    pub e_size: u64,
    pub ratio: f64,
    pub method: CertMethod,
    pub verified: bool,
}

/// Ratios `|E_prod|/N^d` for a list of side lengths divisible by 4, each set
/// certified unobservable.
pub fn density_sequence(dim: usize, n_list: &[u64]) -> Result<Vec<DensitySequenceRow>> {
    n_list
        .iter()
        .map(|&n_side| {
            if n_side % 4 != 0 {
                return Err(Error::InvalidInput(format!(
                    "density sequence needs 4 | N, got {n_side}"
                )));
            }
            let c = product_construction(n_side, dim)?;
            if c.e_prod.card() as u64 != c.e_size {
                return Err(Error::ContractViolation(format!(
                    "count mismatch at N={n_side}: enumerated {} vs closed form {}",
                    c.e_prod.card(),
                    c.e_size
                )));
            }
            let cert = certify_unobservable(&c)?;
            Ok(DensitySequenceRow {
                n_side,
                e_size: c.e_size,
                ratio: c.density_ratio(),
                method: cert.method,
                verified: cert.verified,
            })
        })
        .collect()
}

/// Support statistics of random vectors in the span of the `2^d` characters
/// `{φ_{s∘r}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupportCheckReport {
    pub n_side: u64,
    pub dim: usize,
    pub r: Vec<u64>,
    pub trials: usize,
    pub min_support: u64,
    /// Uncertainty lower bound `N^d / 2^d`.
    pub bound: u64,
    /// `(|supp Ψ_r|, (N/2)^d)` when `4 | N` and `r = N/4` coordinatewise.
    pub psi_support_and_target: Option<(u64, u64)>,
}

impl SupportCheckReport {
    pub fn all_above_bound(&self) -> bool {
        self.min_support >= self.bound && self.psi_support_and_target.is_none_or(|(s, t)| s == t)
    }
}

/// Sample `trials` random nonzero coefficient vectors over the spectral
/// support of `Ψ_r` and measure the support of the synthesized functions.
/// The support threshold `1e−10·‖ψ‖_∞` separates exact sine zeros from
/// round-off. Requires every `r_j ∉ {0, N/2}` so the `2^d` frequencies stay
/// distinct.
pub fn donoho_stark_check(
    n_side: u64,
    dim: usize,
    r: &[u64],
    trials: usize,
    seed: u64,
) -> Result<SupportCheckReport> {
    use rand::{Rng, SeedableRng};
    if r.len() != dim || dim == 0 {
        return Err(Error::InvalidInput("frequency dimension mismatch".into()));
    }
    for &rj in r {
        let rj = rj % n_side;
        if rj == 0 || (n_side.is_multiple_of(2) && rj == n_side / 2) {
            return Err(Error::InvalidInput(
                "frequencies 0 and N/2 collapse the sign orbit".into(),
            ));
        }
    }
    let total = (n_side as usize)
        .checked_pow(dim as u32)
        .filter(|&t| t <= 1 << 22)
        .ok_or_else(|| Error::InvalidInput("torus too large".into()))?;

    let mut freqs: Vec<Vec<u64>> = Vec::with_capacity(1 << dim);
    for signs in 0..(1u32 << dim) {
        let f: Vec<u64> = (0..dim)
            .map(|j| {
                let rj = r[j] % n_side;
                if signs >> j & 1 == 1 {
                    (n_side - rj) % n_side
                } else {
                    rj
                }
            })
            .collect();
        freqs.push(f);
    }

    let coords: Vec<Vec<usize>> = (0..total)
        .map(|v| torus_coords(v, n_side as usize, dim))
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut min_support = u64::MAX;
    for _ in 0..trials {
        let coeffs: Vec<C64> = (0..freqs.len())
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let values: Vec<C64> = coords
            .iter()
            .map(|x| {
                freqs
                    .iter()
                    .zip(&coeffs)
                    .map(|(k, &c)| c * character_value(n_side, k, x))
                    .sum()
            })
            .collect();
        let sup_norm = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        let support = values
            .iter()
            .filter(|v| v.norm() > 1e-10 * sup_norm)
            .count() as u64;
        min_support = min_support.min(support);
    }

    let quarter = n_side.is_multiple_of(4) && r.iter().all(|&rj| rj % n_side == n_side / 4);
    let psi_support_and_target = quarter.then(|| {
        let c = product_construction(n_side, dim).expect("valid construction");
        (c.support_size, (n_side / 2).pow(dim as u32))
    });

    Ok(SupportCheckReport {
        n_side,
        dim,
        r: r.to_vec(),
        trials,
        min_support,
        bound: n_side.pow(dim as u32) / 2u64.pow(dim as u32),
        psi_support_and_target,
    })
}
