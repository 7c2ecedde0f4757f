//! Density matrices with subsystem structure.
//!
//! Subsystems are ordered row-major: the leftmost subsystem is the most
//! significant index of the composite basis. A state with two subsystems is
//! read as the bipartite split `A|B`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix, LinalgError, HERMITIAN_TOL, ORTH_TOL, PSD_TOL};

/// Trace tolerance for a valid density matrix.
pub const TRACE_TOL: f64 = 1e-9;

/// Minimum pairwise eigenvalue gap of a nondegenerate random PE state.
pub const PE_GRID_GAP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("subsystem dimensions must be a nonempty list of positive integers")]
    BadDims,
    #[error("matrix side {got} does not match the product of dims ({expected})")]
    DimMismatch { expected: usize, got: usize },
    #[error("matrix is not Hermitian (max |rho - rho^dagger| = {0:e})")]
    NonHermitian(f64),
    #[error("trace is {0} instead of 1")]
    TraceNotOne(f64),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("subsystem index {index} out of range for {count} subsystems")]
    BadIndex { index: usize, count: usize },
    #[error("at least one subsystem must be kept")]
    NothingKept,
    #[error("unknown state name `{0}`")]
    UnknownName(String),
    #[error("bad parameter `{name}`: {reason}")]
    BadParam { name: String, reason: String },
    #[error("expected {expected} blocks, got {got}")]
    BlockCountMismatch { expected: usize, got: usize },
    #[error("block {0} has a different shape from block 0")]
    BlockShape(usize),
    #[error("bad spectrum: {0}")]
    BadSpectrum(String),
    #[error("operator is not unitary (max |U^dagger U - I| = {0:e})")]
    NotUnitary(f64),
    #[error("operator size {got} does not match subsystem dimension {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("malformed state file: {0}")]
    Format(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, StateError>;

/// A validated density matrix together with its subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Skips validation; for results of operations that preserve validity.
    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.nrows());
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    /// `(d_A, d_B)` when the state has exactly two subsystems.
    pub fn bipartite_dims(&self) -> Option<(usize, usize)> {
        match self.dims[..] {
            [a, b] => Some((a, b)),
            _ => None,
        }
    }

    /// Reorders subsystems so that `order[k]` becomes the new subsystem `k`.
    pub fn permute_subsystems(&self, order: &[usize]) -> Result<DensityMatrix> {
        let m = self.dims.len();
        let mut seen = vec![false; m];
        for &i in order {
            if i >= m || seen[i] {
                return Err(StateError::BadIndex { index: i, count: m });
            }
            seen[i] = true;
        }
        if order.len() != m {
            return Err(StateError::BadDims);
        }
        let offsets = subsystem_offsets(&self.dims, order);
        let n = self.dim();
        let src = self.matrix.as_dmatrix();
        let out = DMatrix::from_fn(n, n, |r, c| src[(offsets[r], offsets[c])]);
        let dims = order.iter().map(|&i| self.dims[i]).collect();
        Ok(Self::from_parts_unchecked(dims, ComplexMatrix::wrap(out)))
    }

    /// Flattens the state into the bipartite split `left | rest`, with each
    /// side's subsystems kept in ascending order.
    pub fn bipartition(&self, left: &[usize]) -> Result<DensityMatrix> {
        let m = self.dims.len();
        let mut in_left = vec![false; m];
        for &i in left {
            if i >= m {
                return Err(StateError::BadIndex { index: i, count: m });
            }
            in_left[i] = true;
        }
        let l: Vec<usize> = (0..m).filter(|&i| in_left[i]).collect();
        let r: Vec<usize> = (0..m).filter(|&i| !in_left[i]).collect();
        if l.is_empty() || r.is_empty() {
            return Err(StateError::BadDims);
        }
        let order: Vec<usize> = l.iter().chain(&r).copied().collect();
        let permuted = self.permute_subsystems(&order)?;
        let da = l.iter().map(|&i| self.dims[i]).product();
        let db = r.iter().map(|&i| self.dims[i]).product();
        Ok(Self::from_parts_unchecked(vec![da, db], permuted.matrix))
    }
}

/// Basis offsets of every multi-index over `subset`, enumerated row-major in
/// the order the subset lists its subsystems.
pub(crate) fn subsystem_offsets(dims: &[usize], subset: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut offsets = vec![0usize];
    for &s in subset {
        let (d, stride) = (dims[s], strides[s]);
        offsets = offsets
            .iter()
            .flat_map(|&base| (0..d).map(move |i| base + i * stride))
            .collect();
    }
    offsets
}

/// Traces out `traced` from a matrix on `dims` (no validity checks).
pub(crate) fn trace_out(m: &ComplexMatrix, dims: &[usize], traced: &[usize]) -> ComplexMatrix {
    let kept: Vec<usize> = (0..dims.len()).filter(|i| !traced.contains(i)).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| traced.contains(i)).collect();
    let ko = subsystem_offsets(dims, &kept);
    let to = subsystem_offsets(dims, &traced);
    let src = m.as_dmatrix();
    let out = DMatrix::from_fn(ko.len(), ko.len(), |r, c| {
        to.iter()
            .map(|&t| src[(ko[r] + t, ko[c] + t)])
            .sum::<Complex64>()
    });
    ComplexMatrix::wrap(out)
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(StateError::BadDims);
    }
    Ok(dims.iter().product())
}

/// Checks the density-matrix invariants and returns the validated state.
///
/// The stored matrix is the Hermitian part of the input, which leaves an
/// exactly Hermitian input bit-for-bit unchanged.
pub fn validate(dims: &[usize], matrix: ComplexMatrix) -> Result<DensityMatrix> {
    let total = check_dims(dims)?;
    if !matrix.is_square() || matrix.nrows() != total {
        return Err(StateError::DimMismatch {
            expected: total,
            got: matrix.nrows(),
        });
    }
    let dev = matrix.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(StateError::NonHermitian(dev));
    }
    let matrix = matrix.hermitian_part();
    let tr = matrix.trace().re;
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(StateError::TraceNotOne(tr));
    }
    let lowest = linalg::eig_hermitian(&matrix, false)?.min();
    if lowest < -PSD_TOL {
        return Err(StateError::NotPsd(lowest));
    }
    Ok(DensityMatrix {
        dims: dims.to_vec(),
        matrix,
    })
}

/// Reduced state after tracing out `traced_subsystems`.
pub fn partial_trace(rho: &DensityMatrix, traced_subsystems: &[usize]) -> Result<DensityMatrix> {
    let m = rho.num_subsystems();
    if let Some(&bad) = traced_subsystems.iter().find(|&&i| i >= m) {
        return Err(StateError::BadIndex {
            index: bad,
            count: m,
        });
    }
    let kept: Vec<usize> = (0..m).filter(|i| !traced_subsystems.contains(i)).collect();
    if kept.is_empty() {
        return Err(StateError::NothingKept);
    }
    let reduced = trace_out(&rho.matrix, &rho.dims, traced_subsystems).hermitian_part();
    let dims = kept.iter().map(|&i| rho.dims[i]).collect();
    Ok(DensityMatrix::from_parts_unchecked(dims, reduced))
}

/// `ρ ⊗ σ` with concatenated subsystem lists.
pub fn tensor(rho: &DensityMatrix, sigma: &DensityMatrix) -> DensityMatrix {
    let dims = rho.dims.iter().chain(&sigma.dims).copied().collect();
    DensityMatrix::from_parts_unchecked(dims, linalg::kron(&rho.matrix, &sigma.matrix))
}

/// Named state families.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedStateSpec {
    pub name: String,
    pub params: Vec<(String, f64)>,
}

impl NamedStateSpec {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: Vec::new(),
        }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: f64) -> Self {
        self.params.push((key.into(), value));
        self
    }

    fn param(&self, key: &str) -> Option<f64> {
        self.params
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|&(_, v)| v)
    }

    fn allow_only(&self, keys: &[&str]) -> Result<()> {
        match self
            .params
            .iter()
            .find(|(k, _)| !keys.contains(&k.as_str()))
        {
            Some((k, _)) => Err(StateError::BadParam {
                name: k.clone(),
                reason: format!("not a parameter of `{}`", self.name),
            }),
            None => Ok(()),
        }
    }
}

/// Canonical names accepted by [`make_named_state`]; `-` and `_` are
/// interchangeable and `ps` abbreviates `pseudo_entangled`.
pub const STATE_NAMES: [&str; 7] = [
    "pseudo_entangled",
    "zero_plus",
    "bell",
    "classical_cc",
    "one_way_cc",
    "tripartite_cex",
    "maximally_mixed",
];

fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

fn basis_ket(d: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[i] = Complex64::new(1.0, 0.0);
    v
}

fn plus_ket() -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![Complex64::new(h, 0.0); 2]
}

fn bell_ket() -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)]
}

/// Equal mixture of the given pure states.
fn even_mixture(kets: &[Vec<Complex64>]) -> ComplexMatrix {
    let n = kets[0].len();
    let w = 1.0 / kets.len() as f64;
    kets.iter().fold(ComplexMatrix::zeros(n, n), |acc, k| {
        &acc + &ComplexMatrix::projector(k).scale(w)
    })
}

/// Builds one of the named states.
///
/// * `pseudo_entangled` (`p` in (0, 1]): `(1-p) I/4 + p |ψ⟩⟨ψ|`.
/// * `zero_plus`: `(|00⟩⟨00| + |++⟩⟨++|) / 2`.
/// * `bell`: `|ψ⟩⟨ψ|` with `|ψ⟩ = (|00⟩ + |11⟩)/√2`.
/// * `classical_cc`: `(|00⟩⟨00| + |11⟩⟨11|) / 2`.
/// * `one_way_cc`: `(|00⟩⟨00| + |1+⟩⟨1+|) / 2`.
/// * `tripartite_cex`: `(|000⟩⟨000| + |1+1⟩⟨1+1|) / 2` on dims (2, 2, 2).
/// * `maximally_mixed` (`da`, `db`, default 2): `I / (da db)`.
pub fn make_named_state(spec: &NamedStateSpec) -> Result<DensityMatrix> {
    let key = spec.name.replace('-', "_").to_ascii_lowercase();
    let zero = basis_ket(2, 0);
    let one = basis_ket(2, 1);
    let plus = plus_ket();
    let (dims, matrix) = match key.as_str() {
        "pseudo_entangled" | "ps" => {
            spec.allow_only(&["p"])?;
            let p = spec.param("p").ok_or_else(|| StateError::BadParam {
                name: "p".into(),
                reason: "required".into(),
            })?;
            if !(p > 0.0 && p <= 1.0) {
                return Err(StateError::BadParam {
                    name: "p".into(),
                    reason: format!("{p} not in (0, 1]"),
                });
            }
            let bell = ComplexMatrix::projector(&bell_ket());
            let m = &ComplexMatrix::identity(4).scale((1.0 - p) / 4.0) + &bell.scale(p);
            (vec![2, 2], m)
        }
        "zero_plus" => {
            spec.allow_only(&[])?;
            (
                vec![2, 2],
                even_mixture(&[kron_vec(&zero, &zero), kron_vec(&plus, &plus)]),
            )
        }
        "bell" => {
            spec.allow_only(&[])?;
            (vec![2, 2], ComplexMatrix::projector(&bell_ket()))
        }
        "classical_cc" => {
            spec.allow_only(&[])?;
            (
                vec![2, 2],
                even_mixture(&[kron_vec(&zero, &zero), kron_vec(&one, &one)]),
            )
        }
        "one_way_cc" => {
            spec.allow_only(&[])?;
            (
                vec![2, 2],
                even_mixture(&[kron_vec(&zero, &zero), kron_vec(&one, &plus)]),
            )
        }
        "tripartite_cex" => {
            spec.allow_only(&[])?;
            let a = kron_vec(&kron_vec(&zero, &zero), &zero);
            let b = kron_vec(&kron_vec(&one, &plus), &one);
            (vec![2, 2, 2], even_mixture(&[a, b]))
        }
        "maximally_mixed" => {
            spec.allow_only(&["da", "db"])?;
            let mut dims = Vec::with_capacity(2);
            for name in ["da", "db"] {
                let v = spec.param(name).unwrap_or(2.0);
                if !(v >= 1.0 && v.fract() == 0.0 && v <= 4096.0) {
                    return Err(StateError::BadParam {
                        name: name.into(),
                        reason: format!("{v} is not a positive integer dimension"),
                    });
                }
                dims.push(v as usize);
            }
            let d = dims[0] * dims[1];
            (dims, ComplexMatrix::identity(d).scale(1.0 / d as f64))
        }
        _ => return Err(StateError::UnknownName(spec.name.clone())),
    };
    validate(&dims, matrix)
}

/// Which party carries the classical (computational-basis) register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

/// One-way classically correlated state `Σ_i |i⟩⟨i| ⊗ σ_i` (or
/// `Σ_i σ_i ⊗ |i⟩⟨i|` for `Party::B`), where `blocks[i] = σ_i`.
pub fn make_1wcc(basis_side: Party, blocks: &[ComplexMatrix]) -> Result<DensityMatrix> {
    let first = blocks.first().ok_or(StateError::BlockCountMismatch {
        expected: 1,
        got: 0,
    })?;
    if !first.is_square() {
        return Err(StateError::BlockShape(0));
    }
    let d_other = first.nrows();
    for (i, b) in blocks.iter().enumerate() {
        if !b.is_square() || b.nrows() != d_other {
            return Err(StateError::BlockShape(i));
        }
        let dev = b.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(StateError::NonHermitian(dev));
        }
        let lowest = linalg::eig_hermitian(b, false)?.min();
        if lowest < -PSD_TOL {
            return Err(StateError::NotPsd(lowest));
        }
    }
    let d_basis = blocks.len();
    let total = d_basis * d_other;
    let mut m = ComplexMatrix::zeros(total, total);
    for (i, b) in blocks.iter().enumerate() {
        let reg = ComplexMatrix::projector(&basis_ket(d_basis, i));
        let term = match basis_side {
            Party::A => linalg::kron(&reg, b),
            Party::B => linalg::kron(b, &reg),
        };
        m = &m + &term;
    }
    let dims = match basis_side {
        Party::A => vec![d_basis, d_other],
        Party::B => vec![d_other, d_basis],
    };
    validate(&dims, m)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let diag = r[(k, k)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    ComplexMatrix::wrap(q)
}

/// Deterministic Haar-random unitary for a seed.
pub fn random_unitary_seeded(d: usize, seed: u64) -> ComplexMatrix {
    random_unitary(d, &mut rng_for(seed))
}

/// Uniform variates on (0, 1] normalized to sum to one.
fn random_probabilities<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

fn conjugate(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    (&(u * m) * &u.adjoint()).hermitian_part()
}

/// Random state `U diag(p) U†` with Haar `U`; `spectrum` fixes `p`.
pub fn random_density(
    dims: &[usize],
    seed: u64,
    spectrum: Option<&[f64]>,
) -> Result<DensityMatrix> {
    let total = check_dims(dims)?;
    let mut rng = rng_for(seed);
    let probs = match spectrum {
        Some(s) => {
            if s.len() != total {
                return Err(StateError::BadSpectrum(format!(
                    "expected {total} values, got {}",
                    s.len()
                )));
            }
            if let Some(v) = s.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(StateError::BadSpectrum(format!(
                    "entry {v} is negative or not finite"
                )));
            }
            let sum: f64 = s.iter().sum();
            if (sum - 1.0).abs() > TRACE_TOL {
                return Err(StateError::BadSpectrum(format!("entries sum to {sum}")));
            }
            s.to_vec()
        }
        None => random_probabilities(total, &mut rng),
    };
    let u = random_unitary(total, &mut rng);
    let m = conjugate(&u, &ComplexMatrix::from_diagonal(&probs));
    Ok(DensityMatrix::from_parts_unchecked(dims.to_vec(), m))
}

/// Random eigenvalue grid for a product-eigenbasis state.
///
/// Nondegenerate grids are a shuffled ladder `k + 1 + u_k/2`, normalized,
/// so neighbouring values differ by at least `1 / (2 Σ)`. Otherwise the grid
/// is a normalized uniform draw in which some entries repeat earlier ones or
/// vanish, so that degenerate and rank-deficient PE states are covered too.
fn pe_grid<R: Rng + ?Sized>(n: usize, nondegenerate: bool, rng: &mut R) -> Vec<f64> {
    if nondegenerate {
        let mut raw: Vec<f64> = (0..n)
            .map(|k| k as f64 + 1.0 + 0.5 * rng.random::<f64>())
            .collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            raw.swap(i, j);
        }
        let total: f64 = raw.iter().sum();
        return raw.into_iter().map(|v| v / total).collect();
    }
    let mut raw: Vec<f64> = Vec::with_capacity(n);
    for k in 0..n {
        let roll: f64 = rng.random();
        let v = if k > 0 && roll < 0.25 {
            raw[rng.random_range(0..k)]
        } else if roll < 0.4 {
            0.0
        } else {
            1.0 - rng.random::<f64>()
        };
        raw.push(v);
    }
    if raw.iter().all(|&v| v == 0.0) {
        raw[0] = 1.0;
    }
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Random state with a product eigenbasis `{U_A|j⟩ ⊗ U_B|k⟩}`.
pub fn random_pe_state(
    dim_a: usize,
    dim_b: usize,
    seed: u64,
    nondegenerate: bool,
) -> DensityMatrix {
    let mut rng = rng_for(seed);
    let ua = random_unitary(dim_a, &mut rng);
    let ub = random_unitary(dim_b, &mut rng);
    let grid = pe_grid(dim_a * dim_b, nondegenerate, &mut rng);
    let u = linalg::kron(&ua, &ub);
    let m = conjugate(&u, &ComplexMatrix::from_diagonal(&grid));
    DensityMatrix::from_parts_unchecked(vec![dim_a, dim_b], m)
}

/// Random state with a fully product eigenbasis over `dims`.
pub fn random_fully_product_state(
    dims: &[usize],
    seed: u64,
    nondegenerate: bool,
) -> Result<DensityMatrix> {
    let total = check_dims(dims)?;
    let mut rng = rng_for(seed);
    let locals: Vec<ComplexMatrix> = dims.iter().map(|&d| random_unitary(d, &mut rng)).collect();
    let grid = pe_grid(total, nondegenerate, &mut rng);
    let u = linalg::kron_all(&locals).expect("dims nonempty");
    let m = conjugate(&u, &ComplexMatrix::from_diagonal(&grid));
    Ok(DensityMatrix::from_parts_unchecked(dims.to_vec(), m))
}

/// `(I ⊗ … ⊗ U ⊗ … ⊗ I) ρ (…)†` with `U` on `subsystem`.
pub fn apply_local_unitary(
    rho: &DensityMatrix,
    u: &ComplexMatrix,
    subsystem: usize,
) -> Result<DensityMatrix> {
    let m = rho.num_subsystems();
    if subsystem >= m {
        return Err(StateError::BadIndex {
            index: subsystem,
            count: m,
        });
    }
    let d = rho.dims[subsystem];
    if !u.is_square() || u.nrows() != d {
        return Err(StateError::SizeMismatch {
            expected: d,
            got: u.nrows(),
        });
    }
    let dev = linalg::unitarity_deviation(u);
    if dev > ORTH_TOL {
        return Err(StateError::NotUnitary(dev));
    }
    let factors: Vec<ComplexMatrix> = rho
        .dims
        .iter()
        .enumerate()
        .map(|(k, &dk)| {
            if k == subsystem {
                u.clone()
            } else {
                ComplexMatrix::identity(dk)
            }
        })
        .collect();
    let full = linalg::kron_all(&factors).expect("dims nonempty");
    Ok(DensityMatrix::from_parts_unchecked(
        rho.dims.clone(),
        conjugate(&full, &rho.matrix),
    ))
}

/// Serializes a state: a `dims:` header line, then one line per row holding
/// `re im` pairs at 17 significant digits.
pub fn to_text(rho: &DensityMatrix) -> String {
    let mut out = String::from("dims:");
    for d in &rho.dims {
        write!(out, " {d}").unwrap();
    }
    out.push('\n');
    let n = rho.dim();
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                let z = rho.matrix[(i, j)];
                format!("{:.16e} {:.16e}", z.re, z.im)
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the text format of [`to_text`] and validates the result.
///
/// Blank lines are ignored. Syntax problems are reported as
/// [`StateError::Format`]; invariant violations as the matching variant.
pub fn from_text(text: &str) -> Result<DensityMatrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| StateError::Format("empty input".into()))?;
    let rest = header
        .strip_prefix("dims:")
        .ok_or_else(|| StateError::Format("first line must start with `dims:`".into()))?;
    let dims = rest
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| StateError::Format(format!("bad dimension `{t}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let total = check_dims(&dims)?;
    let mut entries = Vec::with_capacity(total * total);
    let mut rows = 0;
    for (r, line) in lines.enumerate() {
        let values = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| StateError::Format(format!("row {}: bad number `{t}`", r + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != 2 * total {
            return Err(StateError::Format(format!(
                "row {} has {} numbers, expected {}",
                r + 1,
                values.len(),
                2 * total
            )));
        }
        entries.extend(values.chunks(2).map(|p| Complex64::new(p[0], p[1])));
        rows += 1;
    }
    if rows != total {
        return Err(StateError::Format(format!(
            "expected {total} rows, found {rows}"
        )));
    }
    let matrix = ComplexMatrix::from_row_major(total, total, entries)?;
    validate(&dims, matrix)
}
