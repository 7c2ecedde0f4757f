//! Dense complex matrix kernel.
//!
//! Everything in the crate is carried by [`ComplexMatrix`], a thin wrapper
//! around a dynamically sized `nalgebra` matrix that guarantees finite
//! entries. The spectral routines here (Hermitian eigendecomposition,
//! positive square root, support-restricted powers) all symmetrize their
//! input before decomposing it and return eigenvalues in descending order.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use faer::Mat;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Maximum entrywise deviation `|H - H†|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues down to `-PSD_TOL` (scaled by the spectral radius when it
/// exceeds one) are clamped to zero instead of rejected.
pub const PSD_TOL: f64 = 1e-10;
/// Relative threshold below which an eigenvalue is treated as an exact zero.
pub const NULL_TOL: f64 = 1e-12;
/// Reconstruction tolerance for decompositions.
pub const RECON_TOL: f64 = 1e-9;
/// Orthonormality tolerance for eigenvectors and unitaries.
pub const ORTH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("entry count {got} does not match a {rows}x{cols} matrix")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        got: usize,
    },
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NonHermitian(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("iterative solver failed to converge")]
    IterationFailure,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_iterator(rows, cols, entries))
    }

    /// Convenience constructor for real matrices given as rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let entries: Vec<Complex64> = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)))
            .collect();
        Self::from_row_major(n_rows, n_cols, entries)
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(LinalgError::Empty);
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(LinalgError::NonFinite(i, j));
                }
            }
        }
        Ok(Self(m))
    }

    /// Wraps results of internal arithmetic on finite inputs.
    pub(crate) fn wrap(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Self(m)
    }

    /// The rank-one operator `|v><v|`.
    pub fn projector(v: &[Complex64]) -> Self {
        let col = DVector::from_column_slice(v);
        Self(&col * col.adjoint())
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.0.nrows() == self.0.ncols()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.nrows() * self.ncols());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Max-norm distance to `other`; infinite when the shapes differ.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.0.shape() != other.0.shape() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// `max |H - H†|`, or infinity for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// `(H + H†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix {}x{} ", self.nrows(), self.ncols())?;
        f.debug_list().entries(self.row_major()).finish()
    }
}

/// Real eigenvalues in descending order, optionally with the matching unit
/// eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: Option<Vec<DVector<Complex64>>>,
}

impl Spectrum {
    /// Sorts `values` descending; for spectra that never had vectors.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self {
            values,
            vectors: None,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> Option<&[DVector<Complex64>]> {
        self.vectors.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `Σ_k f(e_k) v_k v_k†`; `None` when the vectors were not computed.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> Option<ComplexMatrix> {
        let vectors = self.vectors.as_ref()?;
        let n = self.values.len();
        let mut basis = DMatrix::zeros(n, n);
        let mut scaled = DMatrix::zeros(n, n);
        for (k, (v, &e)) in vectors.iter().zip(&self.values).enumerate() {
            let w = f(e);
            basis.set_column(k, v);
            scaled.set_column(k, &(v * Complex64::new(w, 0.0)));
        }
        Some(ComplexMatrix(
            (&scaled * basis.adjoint() + &basis * scaled.adjoint()) * Complex64::new(0.5, 0.0),
        ))
    }

    /// `Σ_k e_k v_k v_k†`.
    pub fn reconstruct(&self) -> Option<ComplexMatrix> {
        self.spectral_map(|e| e)
    }
}

fn check_square(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(LinalgError::NonSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian to within [`HERMITIAN_TOL`]; it is replaced by
/// `(H + H†) / 2` before decomposition. Eigenvalues come back in descending
/// order. Eigenvector order inside a degenerate cluster is unspecified.
pub fn eig_hermitian(h: &ComplexMatrix, want_vectors: bool) -> Result<Spectrum> {
    check_square(h)?;
    let dev = h.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(LinalgError::NonHermitian(dev));
    }
    let n = h.nrows();
    let sym = to_faer(&h.hermitian_part().0);
    let eig = sym
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| LinalgError::IterationFailure)?;
    let raw: Vec<f64> = (0..n).map(|k| eig.S()[k].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[b].total_cmp(&raw[a]));
    let values: Vec<f64> = order.iter().map(|&k| raw[k]).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(LinalgError::IterationFailure);
    }
    let u = eig.U();
    let vectors = want_vectors.then(|| {
        order
            .iter()
            .map(|&k| DVector::from_fn(n, |i, _| u[(i, k)]))
            .collect::<Vec<_>>()
    });
    Ok(Spectrum { values, vectors })
}

/// Clamp threshold for tiny negative eigenvalues of a PSD matrix whose
/// largest eigenvalue is `top`.
fn psd_floor(top: f64) -> f64 {
    -PSD_TOL * top.abs().max(1.0)
}

fn psd_spectrum(h: &ComplexMatrix) -> Result<Spectrum> {
    let spec = eig_hermitian(h, true)?;
    let lowest = spec.min();
    if lowest < psd_floor(spec.max()) {
        return Err(LinalgError::NotPsd(lowest));
    }
    Ok(spec)
}

/// The positive square root of a Hermitian PSD matrix.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = psd_spectrum(h)?;
    Ok(spec
        .spectral_map(|e| e.max(0.0).sqrt())
        .expect("vectors requested"))
}

/// `Σ_{e_k > null} e_k^y v_k v_k†` for a Hermitian PSD matrix.
///
/// Eigenvalues at or below `NULL_TOL · max(e_max, 1)` are exact zeros and
/// stay zero for every exponent, negative ones included.
pub fn pseudo_power(h: &ComplexMatrix, y: f64) -> Result<ComplexMatrix> {
    let spec = psd_spectrum(h)?;
    let null = NULL_TOL * spec.max().max(1.0);
    Ok(spec
        .spectral_map(|e| if e > null { e.powf(y) } else { 0.0 })
        .expect("vectors requested"))
}

fn to_faer(m: &DMatrix<Complex64>) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full singular value decomposition `M = U diag(s) V†`, singular values
/// in descending order.
pub fn svd(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let (r, c) = (m.nrows(), m.ncols());
    let dec = to_faer(&m.0)
        .svd()
        .map_err(|_| LinalgError::IterationFailure)?;
    let s: Vec<f64> = (0..r.min(c)).map(|k| dec.S()[k].re).collect();
    if s.iter().any(|v| !v.is_finite()) {
        return Err(LinalgError::IterationFailure);
    }
    let (u, v) = (dec.U(), dec.V());
    let u = DMatrix::from_fn(r, r, |i, j| u[(i, j)]);
    let v = DMatrix::from_fn(c, c, |i, j| v[(i, j)]);
    Ok((ComplexMatrix(u), s, ComplexMatrix(v)))
}

/// `sqrt(M M†)` computed from the singular value decomposition of `M`.
///
/// Going through the SVD keeps singular values accurate to machine precision
/// relative to `‖M‖`; forming `M M†` first would square the error floor of
/// every small eigenvalue.
pub fn gram_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square(m)?;
    let (u, s, _) = svd(m)?;
    let mut scaled = u.0.clone();
    for (k, sk) in s.iter().enumerate() {
        scaled.column_mut(k).scale_mut(*sk);
    }
    Ok(ComplexMatrix(&scaled * u.0.adjoint()).hermitian_part())
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> Option<ComplexMatrix> {
    factors.into_iter().fold(None, |acc, f| match acc {
        None => Some(f.clone()),
        Some(a) => Some(kron(&a, f)),
    })
}

/// `max |U†U - I|`.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    (&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(u.nrows()))
}
