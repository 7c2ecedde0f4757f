//! Bipartite splittings of multi-party states, aggregation of `Q̃` over
//! them, and a structural product-eigenbasis oracle.
//!
//! The oracle decides the existence of a product eigenbasis exactly when the
//! nonzero spectrum is nondegenerate. With degeneracies it can still refute
//! one (a state with a product eigenbasis commutes with `ρ_A ⊗ I` and
//! `I ⊗ ρ_B`), but it never claims one.

use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix, LinalgError, NULL_TOL};
use crate::maps::MapKind;
use crate::measures::{self, MeasureError};
use crate::states::{self, DensityMatrix, StateError};

/// Relative eigenvalue gap below which the oracle declines to decide.
pub const DEGENERACY_GAP: f64 = 1e-8;
/// Minimum largest Schmidt weight of a product eigenvector.
pub const SCHMIDT_TOL: f64 = 1e-9;
/// Overlap tolerance for clustering local factors.
pub const OVERLAP_TOL: f64 = 1e-9;
/// Max-norm tolerance of the marginal commutation test.
pub const COMMUTATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MultipartiteError {
    #[error("need at least two subsystems, got {0}")]
    TooFew(usize),
    #[error("splitting {splitting} does not fit a state with {count} subsystems")]
    BadSplitting { splitting: String, count: usize },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

pub type Result<T> = std::result::Result<T, MultipartiteError>;

/// A split of subsystems `0..m` into two nonempty groups. Canonical form
/// puts subsystem 0 on the left; both sides are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplittingSpec {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl SplittingSpec {
    /// Canonical splitting of `0..m` with `group` on one side.
    pub fn new(m: usize, group: &[usize]) -> Result<Self> {
        let mut in_group = vec![false; m];
        for &i in group {
            if i >= m {
                return Err(MultipartiteError::BadSplitting {
                    splitting: format!("{group:?}"),
                    count: m,
                });
            }
            in_group[i] = true;
        }
        let mut left: Vec<usize> = (0..m).filter(|&i| in_group[i]).collect();
        let mut right: Vec<usize> = (0..m).filter(|&i| !in_group[i]).collect();
        if left.is_empty() || right.is_empty() {
            return Err(MultipartiteError::BadSplitting {
                splitting: format!("{group:?}"),
                count: m,
            });
        }
        if !left.contains(&0) {
            std::mem::swap(&mut left, &mut right);
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn num_subsystems(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

impl fmt::Display for SplittingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", join(&self.left), join(&self.right))
    }
}

/// All `2^(m-1) - 1` canonical bipartite splittings, ordered by the size of
/// the left group and then lexicographically.
pub fn enumerate_bipartitions(m: usize) -> Result<Vec<SplittingSpec>> {
    if m < 2 {
        return Err(MultipartiteError::TooFew(m));
    }
    let mut out = Vec::with_capacity((1 << (m - 1)) - 1);
    // bit k of `mask` puts subsystem k + 1 on the left
    for mask in 0..(1usize << (m - 1)) - 1 {
        let mut left = vec![0];
        left.extend((1..m).filter(|k| mask >> (k - 1) & 1 == 1));
        out.push(SplittingSpec::new(m, &left)?);
    }
    out.sort_by(|a, b| {
        a.left
            .len()
            .cmp(&b.left.len())
            .then_with(|| a.left.cmp(&b.left))
    });
    Ok(out)
}

fn flatten(rho: &DensityMatrix, splitting: &SplittingSpec) -> Result<DensityMatrix> {
    if splitting.num_subsystems() != rho.num_subsystems() {
        return Err(MultipartiteError::BadSplitting {
            splitting: splitting.to_string(),
            count: rho.num_subsystems(),
        });
    }
    Ok(rho.bipartition(&splitting.left)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregator {
    Min,
    Max,
    Avg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplittingRow {
    pub splitting: SplittingSpec,
    pub value: f64,
}

/// Per-splitting `Q̃` values with their aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingTable {
    pub kind: MapKind,
    pub rows: Vec<SplittingRow>,
    pub min: f64,
    pub max: f64,
    pub avg: f64,
}

impl SplittingTable {
    pub fn aggregate(&self, aggregator: Aggregator) -> f64 {
        match aggregator {
            Aggregator::Min => self.min,
            Aggregator::Max => self.max,
            Aggregator::Avg => self.avg,
        }
    }
}

/// Evaluates `Q̃` on every bipartite splitting.
pub fn splitting_table(rho: &DensityMatrix, kind: MapKind) -> Result<SplittingTable> {
    let splittings = enumerate_bipartitions(rho.num_subsystems())?;
    let mut rows = Vec::with_capacity(splittings.len());
    for splitting in splittings {
        let flat = flatten(rho, &splitting)?;
        let value = measures::measure_q_tilde(&flat, kind)?.value;
        rows.push(SplittingRow { splitting, value });
    }
    let min = rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let max = rows
        .iter()
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let avg = rows.iter().map(|r| r.value).sum::<f64>() / rows.len() as f64;
    Ok(SplittingTable {
        kind,
        rows,
        min,
        max,
        avg,
    })
}

/// Aggregated `Q̃` over all splittings, with the full table.
pub fn aggregate_measure(
    rho: &DensityMatrix,
    kind: MapKind,
    aggregator: Aggregator,
) -> Result<(f64, SplittingTable)> {
    let table = splitting_table(rho, kind)?;
    Ok((table.aggregate(aggregator), table))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeStatus {
    HasPE,
    NoPE,
    Indeterminate,
}

impl PeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PeStatus::HasPE => "HasPE",
            PeStatus::NoPE => "NoPE",
            PeStatus::Indeterminate => "Indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PEVerdict {
    pub status: PeStatus,
    pub witness: Option<String>,
}

impl PEVerdict {
    fn has_pe() -> Self {
        Self {
            status: PeStatus::HasPE,
            witness: None,
        }
    }

    fn no_pe(witness: String) -> Self {
        Self {
            status: PeStatus::NoPE,
            witness: Some(witness),
        }
    }

    fn indeterminate(witness: String) -> Self {
        Self {
            status: PeStatus::Indeterminate,
            witness: Some(witness),
        }
    }
}

fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a * b).max_abs_diff(&(b * a))
}

/// Largest Schmidt weight and the leading factors of a `da·db` vector.
fn leading_schmidt(
    v: &DVector<Complex64>,
    da: usize,
    db: usize,
) -> Result<(f64, DVector<Complex64>, DVector<Complex64>)> {
    let m = ComplexMatrix::from_row_major(da, db, v.iter().copied().collect())?;
    let (u, s, w) = linalg::svd(&m)?;
    let left = u.as_dmatrix().column(0).into_owned();
    let right = w.as_dmatrix().column(0).map(|z| z.conj());
    let total: f64 = s.iter().map(|x| x * x).sum();
    let s = s[0];
    Ok((s * s / total, left, right))
}

/// Groups unit vectors that agree up to phase; anything neither parallel nor
/// orthogonal to an existing representative is reported back.
struct FactorClusters {
    reps: Vec<DVector<Complex64>>,
}

impl FactorClusters {
    fn insert(&mut self, v: DVector<Complex64>) -> std::result::Result<(), f64> {
        for r in &self.reps {
            let overlap = r.dotc(&v).norm();
            if overlap >= 1.0 - OVERLAP_TOL {
                return Ok(());
            }
            if overlap > OVERLAP_TOL {
                return Err(overlap);
            }
        }
        self.reps.push(v);
        Ok(())
    }
}

/// Tests the split `splitting` of `rho` for a product eigenbasis.
///
/// Order of checks:
/// 1. Commutation with `ρ_left ⊗ I` and `I ⊗ ρ_right`; failure refutes a
///    product eigenbasis regardless of degeneracy.
/// 2. Every nonzero eigenvalue must be separated from its neighbours by
///    `DEGENERACY_GAP · e_max`, otherwise the verdict is indeterminate.
/// 3. Each nonzero eigenvector must have Schmidt rank one, and the left and
///    right factors must each form orthonormal families up to phase.
///
/// The kernel is ignored: orthonormal partial families always extend to a
/// product basis of the complement.
pub fn pe_oracle_bipartite(rho: &DensityMatrix, splitting: &SplittingSpec) -> Result<PEVerdict> {
    let flat = flatten(rho, splitting)?;
    let (da, db) = flat.bipartite_dims().expect("flattened to two parties");
    let m = flat.matrix();

    let rho_left = states::trace_out(m, &[da, db], &[1]).hermitian_part();
    let rho_right = states::trace_out(m, &[da, db], &[0]).hermitian_part();
    let lift_left = linalg::kron(&rho_left, &ComplexMatrix::identity(db));
    let lift_right = linalg::kron(&ComplexMatrix::identity(da), &rho_right);
    for (name, lifted) in [
        ("rho_left (x) I", &lift_left),
        ("I (x) rho_right", &lift_right),
    ] {
        let c = commutator_norm(m, lifted);
        if c > COMMUTATION_TOL {
            return Ok(PEVerdict::no_pe(format!(
                "state does not commute with {name} (max |[.,.]| = {c:.3e})"
            )));
        }
    }

    let spec = linalg::eig_hermitian(m, true)?;
    let values = spec.values();
    let top = spec.max();
    let null = NULL_TOL * top.max(1.0);
    let gap = DEGENERACY_GAP * top;
    for i in 0..values.len().saturating_sub(1) {
        if values[i] > null && values[i] - values[i + 1] < gap {
            return Ok(PEVerdict::indeterminate(format!(
                "eigenvalues {i} and {} are degenerate ({:.6e}, {:.6e})",
                i + 1,
                values[i],
                values[i + 1]
            )));
        }
    }

    let vectors = spec.vectors().expect("vectors requested");
    let mut lefts = FactorClusters { reps: Vec::new() };
    let mut rights = FactorClusters { reps: Vec::new() };
    for (k, (v, &e)) in vectors.iter().zip(values).enumerate() {
        if e <= null {
            break;
        }
        let (weight, u, w) = leading_schmidt(v, da, db)?;
        if weight < 1.0 - SCHMIDT_TOL {
            return Ok(PEVerdict::no_pe(format!(
                "eigenvector {k} (eigenvalue {e:.6e}) is entangled across {splitting}: largest Schmidt weight {weight:.12}"
            )));
        }
        if let Err(o) = lefts.insert(u) {
            return Ok(PEVerdict::no_pe(format!(
                "left factor of eigenvector {k} overlaps an earlier one by {o:.6e}"
            )));
        }
        if let Err(o) = rights.insert(w) {
            return Ok(PEVerdict::no_pe(format!(
                "right factor of eigenvector {k} overlaps an earlier one by {o:.6e}"
            )));
        }
    }
    Ok(PEVerdict::has_pe())
}

/// Runs the oracle on every splitting: `HasPE` iff all splittings have one,
/// `NoPE` if any splitting refutes one, otherwise `Indeterminate`.
pub fn fully_product_check(rho: &DensityMatrix) -> Result<PEVerdict> {
    let splittings = enumerate_bipartitions(rho.num_subsystems())?;
    let mut undecided = None;
    for s in &splittings {
        let v = pe_oracle_bipartite(rho, s)?;
        match v.status {
            PeStatus::NoPE => {
                return Ok(PEVerdict::no_pe(format!(
                    "{s}: {}",
                    v.witness.unwrap_or_default()
                )));
            }
            PeStatus::Indeterminate if undecided.is_none() => {
                undecided = Some(format!("{s}: {}", v.witness.unwrap_or_default()));
            }
            _ => {}
        }
    }
    Ok(match undecided {
        Some(w) => PEVerdict::indeterminate(w),
        None => PEVerdict::has_pe(),
    })
}
