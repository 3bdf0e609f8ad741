//! Observability of periodic sets `E_{R,p} = ⋃_{s∈R} (pℤ + s)` on the
//! integer lattice, decided through a p-dimensional fiber reduction.
//!
//! Blocking ℤ into cells of length `p` and Fourier-transforming the cell
//! index turns the flow into a family of `p×p` systems `∂_t v = iΦ(x)v`
//! indexed by `x ∈ [−π, π)`. The fiber matrix has the closed-form spectrum
//! `μ_s(x) = 2 − 2cos(η_s(x))`, `η_s(x) = (−x + 2πs)/p`, with eigenvectors
//! `U_s(x) = (e^{irη_s})_r`. All eigenvalues are simple except at the two
//! degenerate fibers `x ∈ {0, −π}`, where they pair into two-dimensional
//! eigenspaces `span{U_{+κ}, U_{−κ}}`, `κ = mπ/p`. Observability of
//! `E_{R,p}` therefore reduces to injectivity of the residue restriction on
//! those pairs, which is the arithmetic condition
//! `gcd(p, {r₁ − r₀ : r₀, r₁ ∈ R}) = 1`.
//!
//! Note `Φ(x)` is the negative of the fiber Laplacian; every observability
//! quantity is invariant under this sign.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph;
use crate::numeric::{frac_mul, gcd, wrap_angle};
use crate::obs::{self, osc_integral};
use crate::quad::composite_simpson;
use crate::spectral::{self, C64};

/// A periodic set given by a modulus and a nonempty residue set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BohrSet {
    p: u64,
    residues: BTreeSet<u64>,
}

impl BohrSet {
    pub fn new(p: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInput("modulus must be >= 1".into()));
        }
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        if residues.is_empty() {
            return Err(Error::InvalidInput("residue set must be nonempty".into()));
        }
        if let Some(&r) = residues.iter().find(|&&r| r >= p) {
            return Err(Error::InvalidInput(format!(
                "residue {r} not below modulus {p}"
            )));
        }
        Ok(BohrSet { p, residues })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    /// Pairwise differences `{r₁ − r₀ mod p}`.
    pub fn difference_set(&self) -> BTreeSet<u64> {
        let mut d = BTreeSet::new();
        for &a in &self.residues {
            for &b in &self.residues {
                d.insert((a + self.p - b) % self.p);
            }
        }
        d
    }

    /// `g = gcd(p, all pairwise residue differences)`; the difference set
    /// generates ℤ/pℤ exactly when `g = 1`.
    pub fn diff_gcd(&self) -> u64 {
        self.difference_set()
            .iter()
            .fold(self.p, |acc, &d| gcd(acc, d))
    }

    pub fn contains(&self, n: i64) -> bool {
        self.residues
            .contains(&(n.rem_euclid(self.p as i64) as u64))
    }

    pub fn density(&self) -> f64 {
        self.residues.len() as f64 / self.p as f64
    }
}

/// Arithmetic observability verdict for a periodic set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArithmeticVerdict {
    pub observable: bool,
    pub g: u64,
}

/// Exact criterion: `E_{R,p}` is observable (at any time) iff the residue
/// differences generate ℤ/pℤ, i.e. iff `g = 1`. For `p = 1` the set is all
/// of ℤ and always observable.
pub fn arithmetic_criterion(set: &BohrSet) -> ArithmeticVerdict {
    let g = set.diff_gcd();
    ArithmeticVerdict {
        observable: g == 1,
        g,
    }
}

/// Fiber matrix `Φ(x)` with its closed-form spectrum.
#[derive(Clone, Debug)]
pub struct FiberSystem {
    p: usize,
    x: f64,
    eta: Vec<f64>,
    mu: Vec<f64>,
}

impl FiberSystem {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Phase angles `η_s = (−x + 2πs)/p`.
    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    /// Eigenvalues `μ_s = 2 − 2cos(η_s)` (unsorted, indexed by `s`).
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Dense `Φ(x)`: `2·Id` minus the cell adjacency, with corner phases
    /// `e^{±ix}`. For `p ≤ 2` the within-cell and across-cell couplings land
    /// on the same entries and accumulate.
    pub fn matrix(&self) -> DMatrix<C64> {
        let p = self.p;
        let mut m = DMatrix::from_diagonal_element(p, p, C64::new(2.0, 0.0));
        let phase = C64::from_polar(1.0, self.x);
        for r in 0..p.saturating_sub(1) {
            m[(r, r + 1)] -= C64::new(1.0, 0.0);
            m[(r + 1, r)] -= C64::new(1.0, 0.0);
        }
        m[(0, p - 1)] -= phase;
        m[(p - 1, 0)] -= phase.conj();
        m
    }

    /// Unnormalized eigenvector `U_s = (e^{irη_s})_r` (norm √p).
    pub fn eigenvector(&self, s: usize) -> DVector<C64> {
        DVector::from_fn(self.p, |r, _| C64::from_polar(1.0, r as f64 * self.eta[s]))
    }

    /// Unit eigenvector `U_s / √p`.
    pub fn unit_eigenvector(&self, s: usize) -> DVector<C64> {
        self.eigenvector(s) / C64::new((self.p as f64).sqrt(), 0.0)
    }

    /// Grouping tolerance adapted to the fiber spectrum.
    pub fn mu_tolerance(&self) -> f64 {
        1e-8 * (1.0 + self.mu.iter().fold(0.0f64, |a, &m| a.max(m.abs())))
    }
}

/// Build the fiber system at parameter `x` (any real; only `x mod 2π`
/// matters). `p = 1` degenerates to the scalar `Φ(x) = 2 − 2cos x`.
pub fn fiber_matrix(p: u64, x: f64) -> FiberSystem {
    assert!(p >= 1, "fiber dimension must be >= 1");
    let p = p as usize;
    let eta: Vec<f64> = (0..p).map(|s| (-x + TAU * s as f64) / p as f64).collect();
    let mu: Vec<f64> = eta.iter().map(|&e| 2.0 - 2.0 * e.cos()).collect();
    FiberSystem { p, x, eta, mu }
}

/// Which of the two degenerate fibers to probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegenerateFiber {
    /// `x = 0`; paired eigenspaces at `κ = mπ/p`, `m` even.
    Zero,
    /// `x = −π`; paired eigenspaces at `κ = mπ/p`, `m` odd.
    MinusPi,
}

impl DegenerateFiber {
    pub fn x(&self) -> f64 {
        match self {
            DegenerateFiber::Zero => 0.0,
            DegenerateFiber::MinusPi => -PI,
        }
    }

    /// Indices `m` of the two-dimensional eigenspaces `κ = mπ/p ∈ (0, π)`
    /// living on this fiber.
    pub fn m_values(&self, p: u64) -> Vec<u64> {
        let start = match self {
            DegenerateFiber::Zero => 2,
            DegenerateFiber::MinusPi => 1,
        };
        (start..p).step_by(2).collect()
    }
}

/// Per-eigenspace result of the degenerate-fiber kernel test.
#[derive(Clone, Debug)]
pub struct DegenerateSpaceCheck {
    pub m: u64,
    pub kappa: f64,
    /// `∃ d ∈ D(R): p ∤ m·d`, i.e. some difference sees this pair.
    pub arithmetic_injective: bool,
    /// Smallest eigenvalue of the 2×2 restriction Gram matrix exceeds
    /// `1e−8·|R|`.
    pub numeric_injective: bool,
    pub restriction_min_eig: f64,
}

/// Check injectivity of the residue restriction on every two-dimensional
/// eigenspace of a degenerate fiber, both arithmetically
/// (`sin(dκ) ≠ 0 ⇔ p ∤ m·d`) and by a numerical 2×2 rank test. The two
/// answers must agree; tests enforce this.
pub fn degenerate_kernel_test(set: &BohrSet, fiber: DegenerateFiber) -> Vec<DegenerateSpaceCheck> {
    let p = set.p();
    let diffs = set.difference_set();
    let q = set.residues().len() as f64;
    fiber
        .m_values(p)
        .into_iter()
        .map(|m| {
            let kappa = m as f64 * PI / p as f64;
            let arithmetic_injective = diffs.iter().any(|&d| (m * d) % p != 0);
            // Restriction of span{U_{+κ}, U_{−κ}} to the residues: the 2×2
            // Gram matrix is [[|R|, b],[b̄, |R|]] with b = Σ_{r∈R} e^{−2irκ},
            // so its smallest eigenvalue is |R| − |b|.
            let b: C64 = set
                .residues()
                .iter()
                .map(|&r| C64::from_polar(1.0, -2.0 * r as f64 * kappa))
                .sum();
            let min_eig = q - b.norm();
            DegenerateSpaceCheck {
                m,
                kappa,
                arithmetic_injective,
                numeric_injective: min_eig > 1e-8 * q,
                restriction_min_eig: min_eig,
            }
        })
        .collect()
}

/// Fiber Gramian `W_T(x) = ∫_0^T e^{−itΦ(x)} RᴴR e^{itΦ(x)} dt`, assembled
/// in the orthonormal eigenbasis of `Φ(x)` with the closed-form oscillatory
/// integral.
#[derive(Clone, Debug)]
pub struct FiberGramian {
    pub x: f64,
    pub t: f64,
    /// `W_T(x)` expressed in the eigenbasis `{U_s/√p}` (unitarily equivalent
    /// to the standard-basis operator, so the spectrum is unchanged).
    pub matrix: DMatrix<C64>,
    pub lambda_min: f64,
    kernel_coeffs: DVector<C64>,
    fiber: FiberSystem,
}

impl FiberGramian {
    /// Eigenvector of `W_T(x)` for `λ_min`, mapped back to the standard
    /// `ℂ^p` basis.
    pub fn kernel_vector(&self) -> DVector<C64> {
        let mut v = DVector::zeros(self.fiber.p());
        for s in 0..self.fiber.p() {
            v += self.fiber.unit_eigenvector(s) * self.kernel_coeffs[s];
        }
        v
    }

    pub fn trace(&self) -> f64 {
        (0..self.matrix.nrows())
            .map(|j| self.matrix[(j, j)].re)
            .sum()
    }
}

pub fn fiber_gramian(set: &BohrSet, x: f64, t: f64) -> Result<FiberGramian> {
    if t <= 0.0 {
        return Err(Error::InvalidInput("time horizon must be positive".into()));
    }
    let p = set.p() as usize;
    let fiber = fiber_matrix(set.p(), x);
    let tol = fiber.mu_tolerance();
    let pf = p as f64;
    let mut w = DMatrix::zeros(p, p);
    for j in 0..p {
        for k in 0..p {
            let overlap: C64 = set
                .residues()
                .iter()
                .map(|&r| C64::from_polar(1.0 / pf, r as f64 * (fiber.eta[k] - fiber.eta[j])))
                .sum();
            w[(j, k)] = overlap * osc_integral(fiber.mu[k] - fiber.mu[j], t, tol);
        }
    }
    let dec = spectral::eigendecompose(&w)?;
    Ok(FiberGramian {
        x,
        t,
        matrix: w,
        lambda_min: dec.eigenvalues()[0],
        kernel_coeffs: dec.eigenvector(0),
        fiber,
    })
}

/// A fiber at which the Gramian is (numerically) singular.
#[derive(Clone, Debug)]
pub struct FailingFiber {
    pub x: f64,
    pub kernel: DVector<C64>,
}

/// Combined verdict for a periodic set: the exact arithmetic answer plus the
/// numerical sweep minimum `m_T` over a fiber grid.
#[derive(Clone, Debug)]
pub struct BohrVerdict {
    /// Exact verdict from the arithmetic criterion.
    pub observable: bool,
    pub g: u64,
    pub t: f64,
    /// `min_x λ_min(W_T(x))` over the grid.
    pub m_t: f64,
    /// Verdict implied by the sweep at the shared threshold
    /// [`obs::tau_obs`].
    pub sweep_observable: bool,
    /// `1/m_T` when the sweep is positive.
    pub c_obs_estimate: Option<f64>,
    pub failing_fiber: Option<FailingFiber>,
    pub grid_size: usize,
}

impl BohrVerdict {
    /// The arithmetic and sweep verdicts must agree on grids containing the
    /// degenerate fibers.
    pub fn methods_agree(&self) -> bool {
        self.observable == self.sweep_observable
    }
}

/// Sweep `λ_min(W_T(x))` over a uniform grid on `[−π, π)`. The grid always
/// contains `x = 0` and `x = −π` exactly — the only fibers where
/// observability can fail — so the sweep verdict is decisive, while the rest
/// of the grid estimates the constant. Grid evaluations run in parallel with
/// a deterministic lowest-index tie-break.
pub fn m_t_sweep(set: &BohrSet, t: f64, grid_size: usize) -> Result<BohrVerdict> {
    if grid_size < 64 {
        return Err(Error::InvalidInput(
            "fiber grid must have at least 64 points".into(),
        ));
    }
    let mut xs: Vec<f64> = (0..grid_size)
        .map(|j| -PI + TAU * j as f64 / grid_size as f64)
        .collect();
    // Force the degenerate fibers in exactly; criterion failures happen
    // only there.
    xs[0] = -PI;
    if grid_size.is_multiple_of(2) {
        xs[grid_size / 2] = 0.0;
    } else {
        xs.push(0.0);
    }

    let evaluated: Vec<(usize, f64)> = xs
        .par_iter()
        .enumerate()
        .map(|(j, &x)| Ok((j, fiber_gramian(set, x, t)?.lambda_min)))
        .collect::<Result<_>>()?;
    let (arg, m_t) = evaluated
        .into_iter()
        .fold((usize::MAX, f64::INFINITY), |(ai, av), (j, v)| {
            if v < av || (v == av && j < ai) {
                (j, v)
            } else {
                (ai, av)
            }
        });

    let arithmetic = arithmetic_criterion(set);
    let sweep_observable = m_t > obs::tau_obs(t);
    let failing_fiber = if sweep_observable {
        None
    } else {
        let x = xs[arg];
        let fg = fiber_gramian(set, x, t)?;
        Some(FailingFiber {
            x,
            kernel: fg.kernel_vector(),
        })
    };
    Ok(BohrVerdict {
        observable: arithmetic.observable,
        g: arithmetic.g,
        t,
        m_t,
        sweep_observable,
        c_obs_estimate: sweep_observable.then(|| 1.0 / m_t),
        failing_fiber,
        grid_size,
    })
}

/// Cross-validation of the fiber reduction against the finite-graph path:
/// the cycle on `p·M` vertices with `E = {v : v mod p ∈ R}` decomposes into
/// exactly `M` fibers `x_j ≡ 2πj/M (mod 2π)`, so the cycle Gramian's
/// smallest eigenvalue must equal the minimum of `λ_min(W_T(x_j))`.
#[derive(Clone, Debug)]
pub struct OracleAgreement {
    pub p: u64,
    pub cells: usize,
    pub t: f64,
    pub cycle_mu_min: f64,
    pub cycle_observable: bool,
    pub fiber_min: f64,
    pub fiber_observable: bool,
    pub verdicts_agree: bool,
    /// Relative gap between the two minima.
    pub mu_min_rel_err: f64,
}

pub fn fiber_cycle_oracle(set: &BohrSet, cells: usize, t: f64) -> Result<OracleAgreement> {
    if cells < 4 {
        return Err(Error::InvalidInput("need at least 4 cells".into()));
    }
    let p = set.p();
    let n = p as usize * cells;
    let g = graph::cycle(n)?;
    let (dec, groups) = spectral::decompose_laplacian(&graph::laplacian(&g))?;
    let members: Vec<usize> = (0..n).filter(|&v| set.contains(v as i64)).collect();
    let e = graph::VertexSet::from_indices(n, &members)?;
    let gram = obs::gramian(&dec, &groups, &e, t);
    let report = obs::observability_constant(&gram, &dec)?;

    let mut fiber_min = f64::INFINITY;
    for j in 0..cells {
        let x = wrap_angle(TAU * j as f64 / cells as f64);
        fiber_min = fiber_min.min(fiber_gramian(set, x, t)?.lambda_min);
    }
    let fiber_observable = fiber_min > obs::tau_obs(t);
    let scale = report.mu_min.abs().max(fiber_min.abs()).max(1e-300);
    Ok(OracleAgreement {
        p,
        cells,
        t,
        cycle_mu_min: report.mu_min,
        cycle_observable: report.observable,
        fiber_min,
        fiber_observable,
        verdicts_agree: report.observable == fiber_observable,
        mu_min_rel_err: (report.mu_min - fiber_min).abs() / scale,
    })
}

/// Quadrature check of the quantitative unobservability bound for the
/// even-residue set mod `p`: a frequency-localized initial state near
/// `±π/2` keeps an observed-energy fraction at most `8t²δ²/p`.
#[derive(Clone, Debug)]
pub struct CounterexampleRatio {
    pub p: u64,
    pub delta: f64,
    pub t: f64,
    pub nodes: usize,
    /// Observed-energy ratio at the refined node count.
    pub ratio: f64,
    /// Value at the base node count; the difference monitors quadrature
    /// error.
    pub coarse_ratio: f64,
    /// `8t²δ²/p`.
    pub bound: f64,
}

impl CounterexampleRatio {
    pub fn within_bound(&self) -> bool {
        self.ratio <= self.bound * (1.0 + 1e-6)
    }
}

/// Smooth even bump supported on `(−δ, δ)`, periodized; the normalization
/// cancels in the ratio.
fn bump(y: f64, delta: f64) -> f64 {
    let w = wrap_angle(y);
    let u = w / delta;
    let rad = 1.0 - u * u;
    if rad <= 0.0 {
        0.0
    } else {
        (-1.0 / rad).exp()
    }
}

/// Evaluate the observed-energy ratio of the localized counterexample state
/// by composite Simpson quadrature and compare with the closed-form bound.
///
/// Requires `p` even, `0 < δ < π/p` (so the `p` bump translates stay
/// disjoint; `δ ≤ π/(100p)` is the conservative choice), and at least 4096
/// quadrature panels. The quadrature is repeated at twice the node count and
/// the refined value is reported.
pub fn counterexample_ratio(
    p: u64,
    delta: f64,
    t: f64,
    quad_nodes: usize,
) -> Result<CounterexampleRatio> {
    if p == 0 || !p.is_multiple_of(2) {
        return Err(Error::InvalidInput("modulus must be even".into()));
    }
    if !(delta > 0.0 && delta < PI / p as f64) {
        return Err(Error::InvalidInput(format!(
            "delta must lie in (0, pi/{p}) so the bump translates stay disjoint"
        )));
    }
    if quad_nodes < 4096 {
        return Err(Error::InvalidInput(
            "need at least 4096 quadrature panels".into(),
        ));
    }
    let nodes = quad_nodes + quad_nodes % 2;
    let pf = p as f64;
    let numerator = |x: f64| -> f64 {
        (0..p)
            .map(|r| {
                let u = x - TAU * r as f64 / pf;
                let chi = bump(u - PI / 2.0, delta);
                if chi == 0.0 {
                    0.0
                } else {
                    // |1 − e^{−4it cos u}|² = 4 sin²(2t cos u)
                    4.0 * (2.0 * t * u.cos()).sin().powi(2) * chi * chi
                }
            })
            .sum()
    };
    let chi_sq = |x: f64| bump(x, delta).powi(2);
    let ratio_at = |k: usize| {
        let num = composite_simpson(numerator, -PI, PI, k) / (pf * pf);
        let den = 2.0 * composite_simpson(chi_sq, -PI, PI, k);
        num / den
    };
    let coarse = ratio_at(nodes);
    let refined = ratio_at(nodes * 2);
    Ok(CounterexampleRatio {
        p,
        delta,
        t,
        nodes,
        ratio: refined,
        coarse_ratio: coarse,
        bound: 8.0 * t * t * delta * delta / pf,
    })
}

/// An observable set of prescribed density: a base periodic set `E_{p,R}`
/// with `R = {0..m−1}` (observable since `1 ∈ D(R)`), topped up on the
/// unused residues by an irrational-rotation filter until the density
/// reaches the target. Membership stays a pure predicate.
#[derive(Clone, Debug)]
pub struct MixedDensitySet {
    base: BohrSet,
    /// Fraction of each unused residue class admitted by the rotation test.
    theta: f64,
    alpha: f64,
    target: f64,
}

impl MixedDensitySet {
    pub fn base(&self) -> &BohrSet {
        &self.base
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn target_density(&self) -> f64 {
        self.target
    }

    pub fn contains(&self, n: i64) -> bool {
        let p = self.base.p() as i64;
        let r = n.rem_euclid(p);
        if self.base.contains(n) {
            return true;
        }
        // Fill residue class c: admit n = kp + c when {kα} ∈ [0, θ).
        let k = (n - r) / p;
        frac_mul(k, self.alpha) < self.theta
    }

    /// `|E ∩ [−R, R]| / (2R)` measured by direct counting.
    pub fn empirical_density(&self, radius: i64) -> f64 {
        let count = (-radius..=radius).filter(|&n| self.contains(n)).count();
        count as f64 / (2 * radius) as f64
    }
}

/// Build the mixed construction for a target density `q ∈ (0, 1)`:
/// `p = ⌈2/q⌉`, `m = ⌊qp⌋ ≥ 2`, base residues `{0..m−1}`, and fill
/// proportion `θ = (q − m/p)/(1 − m/p)` applied through the rotation by the
/// irrational `α`. The result contains `E_{p,R}`, hence is observable.
pub fn mixed_density_construct(q: f64, alpha: f64) -> Result<MixedDensitySet> {
    if !(0.0 < q && q < 1.0) {
        return Err(Error::InvalidInput(
            "target density must lie in (0,1)".into(),
        ));
    }
    if !alpha.is_finite() || alpha == 0.0 {
        return Err(Error::InvalidInput(
            "rotation number must be finite and nonzero".into(),
        ));
    }
    let p = (2.0 / q).ceil() as u64;
    let m = ((q * p as f64 + 1e-12).floor() as u64).clamp(2, p - 1);
    let base = BohrSet::new(p, 0..m)?;
    let r = m as f64 / p as f64;
    let theta = ((q - r) / (1.0 - r)).max(0.0);
    Ok(MixedDensitySet {
        base,
        theta,
        alpha,
        target: q,
    })
}
