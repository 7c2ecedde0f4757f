//! One-sided EnCE maps on bipartite states: the partial transpose and the
//! nonlinear power map `P_x = Γ_{1/x} ∘ Γ_x`.
//!
//! Every map here leaves the spectrum of a state with a product eigenbasis
//! unchanged, so a spectrum change witnesses nonclassical correlation.

use std::fmt;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix, LinalgError};
use crate::states::{self, DensityMatrix};

/// `x` values closer than this to 0 or 1 are rejected for the power map.
pub const PARAM_EXCLUSION: f64 = 1e-12;

/// Power-map parameter used when none is given.
pub const DEFAULT_X: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("expected a bipartite state, got {0} subsystems")]
    NotBipartite(usize),
    #[error("power-map parameter x = {0} is not allowed (x must be finite and not 0 or 1)")]
    BadParameter(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, MapError>;

/// Which tensor factor the map acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `I ⊗ Λ`, acting on B.
    Right,
    /// `Λ ⊗ I`, acting on A.
    Left,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Right => "right",
            Side::Left => "left",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapKind {
    Transpose,
    PowerMap(f64),
}

impl MapKind {
    pub fn validate(self) -> Result<Self> {
        if let MapKind::PowerMap(x) = self {
            check_power_parameter(x)?;
        }
        Ok(self)
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::Transpose => write!(f, "transpose"),
            MapKind::PowerMap(x) => write!(f, "power(x={x})"),
        }
    }
}

/// A validated map choice together with the side it acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnceMapSpec {
    kind: MapKind,
    side: Side,
}

impl EnceMapSpec {
    pub fn new(kind: MapKind, side: Side) -> Result<Self> {
        Ok(Self {
            kind: kind.validate()?,
            side,
        })
    }

    pub const fn transpose(side: Side) -> Self {
        Self {
            kind: MapKind::Transpose,
            side,
        }
    }

    pub fn power(x: f64, side: Side) -> Result<Self> {
        Self::new(MapKind::PowerMap(x), side)
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn side(&self) -> Side {
        self.side
    }
}

fn check_power_parameter(x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() < PARAM_EXCLUSION || (x - 1.0).abs() < PARAM_EXCLUSION {
        return Err(MapError::BadParameter(x));
    }
    Ok(())
}

/// Image of a state under a one-sided map. Hermitian, but not necessarily
/// positive (transpose) or of unit trace (power map).
#[derive(Debug, Clone, PartialEq)]
pub struct MappedState {
    pub matrix: ComplexMatrix,
    pub dims: Vec<usize>,
}

impl MappedState {
    pub fn spectrum(&self) -> Result<linalg::Spectrum> {
        Ok(linalg::eig_hermitian(&self.matrix, false)?)
    }
}

fn bipartite(rho: &DensityMatrix) -> Result<(usize, usize)> {
    rho.bipartite_dims()
        .ok_or(MapError::NotBipartite(rho.num_subsystems()))
}

/// Transposes one factor of a `da·db` square matrix.
pub fn partial_transpose_matrix(
    m: &ComplexMatrix,
    da: usize,
    db: usize,
    side: Side,
) -> ComplexMatrix {
    let src = m.as_dmatrix();
    let n = da * db;
    let out = DMatrix::from_fn(n, n, |r, c| {
        let (a, b) = (r / db, r % db);
        let (a2, b2) = (c / db, c % db);
        match side {
            Side::Right => src[(a * db + b2, a2 * db + b)],
            Side::Left => src[(a2 * db + b, a * db + b2)],
        }
    });
    ComplexMatrix::wrap(out)
}

/// Partial transposition of the chosen factor.
pub fn partial_transpose(rho: &DensityMatrix, side: Side) -> Result<MappedState> {
    let (da, db) = bipartite(rho)?;
    Ok(MappedState {
        matrix: partial_transpose_matrix(rho.matrix(), da, db, side),
        dims: rho.dims().to_vec(),
    })
}

/// One-sided `Γ_x` on a (possibly unnormalized) PSD matrix.
///
/// For the right side this is `sqrt(M M†)` with
/// `M = ρ (I_A ⊗ (Tr_A ρ)^{x-1})`; the left side mirrors it with
/// `(Tr_B ρ)^{x-1} ⊗ I_B`. Powers are taken on the support of the marginal.
pub(crate) fn gamma_matrix(
    m: &ComplexMatrix,
    da: usize,
    db: usize,
    side: Side,
    x: f64,
) -> Result<ComplexMatrix> {
    let dims = [da, db];
    let factor = match side {
        Side::Right => {
            let marginal = states::trace_out(m, &dims, &[0]).hermitian_part();
            let k = linalg::pseudo_power(&marginal, x - 1.0)?;
            linalg::kron(&ComplexMatrix::identity(da), &k)
        }
        Side::Left => {
            let marginal = states::trace_out(m, &dims, &[1]).hermitian_part();
            let k = linalg::pseudo_power(&marginal, x - 1.0)?;
            linalg::kron(&k, &ComplexMatrix::identity(db))
        }
    };
    Ok(linalg::gram_sqrt(&(m * &factor))?)
}

/// `(I ⊗ Γ_x) ρ` or `(Γ_x ⊗ I) ρ`.
pub fn gamma_x(rho: &DensityMatrix, side: Side, x: f64) -> Result<MappedState> {
    let (da, db) = bipartite(rho)?;
    if !x.is_finite() {
        return Err(MapError::BadParameter(x));
    }
    Ok(MappedState {
        matrix: gamma_matrix(rho.matrix(), da, db, side, x)?,
        dims: rho.dims().to_vec(),
    })
}

/// `P_x = Γ_{1/x} ∘ Γ_x`, both applied on the same side.
pub fn p_x(rho: &DensityMatrix, side: Side, x: f64) -> Result<MappedState> {
    check_power_parameter(x)?;
    let (da, db) = bipartite(rho)?;
    let once = gamma_matrix(rho.matrix(), da, db, side, x)?;
    let twice = gamma_matrix(&once, da, db, side, 1.0 / x)?;
    Ok(MappedState {
        matrix: twice,
        dims: rho.dims().to_vec(),
    })
}

/// Applies the map described by `spec`.
pub fn apply_ence(rho: &DensityMatrix, spec: &EnceMapSpec) -> Result<MappedState> {
    match spec.kind {
        MapKind::Transpose => partial_transpose(rho, spec.side),
        MapKind::PowerMap(x) => p_x(rho, spec.side, x),
    }
}
