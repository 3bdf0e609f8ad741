//! Hermitian eigendecomposition, tolerance-based eigenspace grouping, and
//! the spectral propagator `e^{itA}`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Laplacian;

pub type C64 = Complex64;

/// Eigenvalues sorted ascending with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
    residual_bound: f64,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> DVector<C64> {
        self.eigenvectors.column(k).into_owned()
    }

    /// `max_k ‖Aψ_k − λ_kψ_k‖₂` measured on the input matrix.
    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs()))
    }

    /// Eigenbasis coefficients `c_k = ⟨ψ_k, u⟩`.
    pub fn coefficients(&self, u: &DVector<C64>) -> DVector<C64> {
        self.eigenvectors.adjoint() * u
    }

    /// `Σ_k c_k ψ_k`.
    pub fn reconstruct(&self, coeffs: &DVector<C64>) -> DVector<C64> {
        &self.eigenvectors * coeffs
    }
}

fn hermitian_defect(a: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

fn sort_ascending(values: DVector<f64>, vectors: DMatrix<C64>) -> (DVector<f64>, DMatrix<C64>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .expect("finite eigenvalues")
    });
    let sorted_values = DVector::from_fn(n, |k, _| values[order[k]]);
    let sorted_vectors = DMatrix::from_fn(n, n, |i, k| vectors[(i, order[k])]);
    (sorted_values, sorted_vectors)
}

/// Eigendecompose a complex Hermitian matrix. The input must be Hermitian
/// within 1e−12 entrywise, otherwise a contract-violation error is returned.
pub fn eigendecompose(a: &DMatrix<C64>) -> Result<SpectralDecomposition> {
    if a.nrows() != a.ncols() {
        return Err(Error::ContractViolation("matrix must be square".into()));
    }
    let defect = hermitian_defect(a);
    if defect > 1e-12 {
        return Err(Error::ContractViolation(format!(
            "matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    let se = a.clone().symmetric_eigen();
    let (values, vectors) = sort_ascending(se.eigenvalues, se.eigenvectors);
    let residual_bound = residual(a, &values, &vectors);
    Ok(SpectralDecomposition {
        eigenvalues: values,
        eigenvectors: vectors,
        residual_bound,
    })
}

/// Eigendecompose a real symmetric matrix through the real solver, then lift
/// the eigenvectors into the complex field.
pub fn eigendecompose_real(a: &DMatrix<f64>) -> Result<SpectralDecomposition> {
    if a.nrows() != a.ncols() {
        return Err(Error::ContractViolation("matrix must be square".into()));
    }
    let n = a.nrows();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if defect > 1e-12 {
        return Err(Error::ContractViolation(format!(
            "matrix is not symmetric (defect {defect:.3e})"
        )));
    }
    let se = a.clone().symmetric_eigen();
    let complex_vectors = se.eigenvectors.map(|x| C64::new(x, 0.0));
    let (values, vectors) = sort_ascending(se.eigenvalues, complex_vectors);
    let ac = a.map(|x| C64::new(x, 0.0));
    let residual_bound = residual(&ac, &values, &vectors);
    Ok(SpectralDecomposition {
        eigenvalues: values,
        eigenvectors: vectors,
        residual_bound,
    })
}

fn residual(a: &DMatrix<C64>, values: &DVector<f64>, vectors: &DMatrix<C64>) -> f64 {
    let av = a * vectors;
    let mut worst = 0.0f64;
    for k in 0..values.len() {
        let r = av.column(k) - vectors.column(k) * C64::new(values[k], 0.0);
        worst = worst.max(r.norm());
    }
    worst
}

/// Decompose a graph Laplacian and group its eigenspaces at the default
/// tolerance.
pub fn decompose_laplacian(l: &Laplacian) -> Result<(SpectralDecomposition, EigenspaceGrouping)> {
    let dec = eigendecompose_real(&l.matrix)?;
    let tol = default_group_tolerance(&dec);
    let groups = group_eigenspaces(&dec, tol)?;
    Ok((dec, groups))
}

/// Default grouping tolerance: `1e−8 · (1 + spectral radius)` — far above
/// eigensolver residuals, far below genuine gaps of integer Laplacians.
pub fn default_group_tolerance(dec: &SpectralDecomposition) -> f64 {
    1e-8 * (1.0 + dec.spectral_radius())
}

/// One tolerance-grouped eigenvalue block: column indices `start..end` of the
/// decomposition plus a representative eigenvalue.
#[derive(Clone, Debug)]
pub struct EigenBlock {
    pub start: usize,
    pub end: usize,
    pub lambda: f64,
}

impl EigenBlock {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// Partition of the spectrum into blocks separated by gaps above a tolerance.
#[derive(Clone, Debug)]
pub struct EigenspaceGrouping {
    blocks: Vec<EigenBlock>,
    tolerance: f64,
}

impl EigenspaceGrouping {
    pub fn blocks(&self) -> &[EigenBlock] {
        &self.blocks
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block whose representative eigenvalue is nearest to `x`.
    pub fn nearest_block(&self, x: f64) -> Option<usize> {
        (0..self.blocks.len()).min_by(|&a, &b| {
            let da = (self.blocks[a].lambda - x).abs();
            let db = (self.blocks[b].lambda - x).abs();
            da.partial_cmp(&db).unwrap()
        })
    }
}

/// Group consecutive eigenvalues whenever the gap is at most `tolerance`.
pub fn group_eigenspaces(
    dec: &SpectralDecomposition,
    tolerance: f64,
) -> Result<EigenspaceGrouping> {
    if tolerance <= 0.0 {
        return Err(Error::InvalidInput(
            "grouping tolerance must be positive".into(),
        ));
    }
    let ev = dec.eigenvalues();
    let mut blocks = Vec::new();
    let mut start = 0;
    for k in 1..=ev.len() {
        if k == ev.len() || ev[k] - ev[k - 1] > tolerance {
            let lambda = ev.rows(start, k - start).mean();
            blocks.push(EigenBlock {
                start,
                end: k,
                lambda,
            });
            start = k;
        }
    }
    Ok(EigenspaceGrouping { blocks, tolerance })
}

/// Solution at time `t` of `∂_t u = iAu`: `u(t) = Σ_k c_k e^{itλ_k} ψ_k`.
pub fn evolve(dec: &SpectralDecomposition, u0: &DVector<C64>, t: f64) -> DVector<C64> {
    assert_eq!(u0.len(), dec.n(), "state dimension mismatch");
    let mut c = dec.coefficients(u0);
    for k in 0..c.len() {
        c[k] *= C64::from_polar(1.0, t * dec.eigenvalues()[k]);
    }
    dec.reconstruct(&c)
}
