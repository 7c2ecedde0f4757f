//! Nonclassical-correlation measures built on the one-sided maps.
//!
//! * `D`: L1 distance between the descending spectra of a state and of its
//!   image. Not subadditive.
//! * `Q`: negative base-2 logarithm of the normalized fidelity between the
//!   state's spectrum and the absolute image spectrum. Subadditive for the
//!   transpose and the power map.
//! * `Q̃`: the mean of the right- and left-side `Q`.
//! * weighted combinations of `Q̃` terms.
//!
//! All measures vanish on states with a product eigenbasis; a nonzero value
//! is a sufficient (not necessary) witness of nonclassical correlation.

use thiserror::Error;

use crate::linalg::{self, LinalgError};
use crate::maps::{self, EnceMapSpec, MapError, MapKind, Side};
use crate::states::DensityMatrix;

/// Values above this count as a detection.
pub const DETECTION_THRESHOLD: f64 = 1e-7;

/// Negative values down to this are reported as zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("mapped state has no weight (N = 0)")]
    DegenerateImage,
    #[error("measure evaluated to {0:e}, outside the numerical tolerance")]
    NumericalFailure(f64),
    #[error("weighted measure needs at least one term")]
    EmptySpec,
    #[error("weight {0} is not positive")]
    BadWeight(f64),
}

impl From<LinalgError> for MeasureError {
    fn from(e: LinalgError) -> Self {
        MeasureError::Map(MapError::Linalg(e))
    }
}

pub type Result<T> = std::result::Result<T, MeasureError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    D,
    Q,
    QTilde,
    Weighted,
}

impl MeasureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::D => "D",
            MeasureKind::Q => "Q",
            MeasureKind::QTilde => "Q_tilde",
            MeasureKind::Weighted => "weighted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideLabel {
    Right,
    Left,
    Average,
    NotApplicable,
}

impl SideLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SideLabel::Right => "right",
            SideLabel::Left => "left",
            SideLabel::Average => "average",
            SideLabel::NotApplicable => "n/a",
        }
    }
}

impl From<Side> for SideLabel {
    fn from(s: Side) -> Self {
        match s {
            Side::Right => SideLabel::Right,
            Side::Left => SideLabel::Left,
        }
    }
}

/// What a measure was evaluated with.
#[derive(Debug, Clone, PartialEq)]
pub enum MapLabel {
    Map(MapKind),
    Weights(Vec<(MapKind, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureResult {
    pub measure: MeasureKind,
    pub map: MapLabel,
    pub side: SideLabel,
    pub value: f64,
    /// Descending spectrum of the input state.
    pub spectrum_in: Vec<f64>,
    /// Descending signed spectrum of the image (right-side image for `Q̃`;
    /// empty for weighted combinations).
    pub spectrum_out: Vec<f64>,
    /// Descending absolute image spectrum, recorded for `Q`.
    pub spectrum_out_abs: Option<Vec<f64>>,
    /// Constituent evaluations (`Q_R`, `Q_L` for `Q̃`; `Q̃` terms for weighted).
    pub components: Vec<MeasureResult>,
}

impl MeasureResult {
    pub fn detected(&self, threshold: f64) -> bool {
        self.value > threshold
    }
}

/// Clamps tiny negative jitter to zero and rejects anything worse.
fn finalize(value: f64) -> Result<f64> {
    if !value.is_finite() || value < -NEGATIVE_CLAMP {
        return Err(MeasureError::NumericalFailure(value));
    }
    Ok(value.max(0.0))
}

struct Spectra {
    input: Vec<f64>,
    output: Vec<f64>,
}

fn spectra(rho: &DensityMatrix, spec: &EnceMapSpec) -> Result<Spectra> {
    let image = maps::apply_ence(rho, spec)?;
    let input = linalg::eig_hermitian(rho.matrix(), false)?.into_values();
    let output = image.spectrum()?.into_values();
    Ok(Spectra { input, output })
}

/// `Σ_s |e_s − e'_s|` over descending signed spectra.
pub fn l1_spectral_distance(input: &[f64], output: &[f64]) -> f64 {
    input.iter().zip(output).map(|(a, b)| (a - b).abs()).sum()
}

/// `−log₂(Σ_s √(e_s ẽ_s) / (√Σe · √Σẽ))` with both sequences sorted
/// descending; `ẽ` are absolute values. `Σe` is the trace of the input and
/// equals one for a valid state.
///
/// Entries at or below the null threshold `NULL_TOL · max(1, max entry)` are
/// treated as exact zeros: under the square root, rounding noise of order
/// `1e-17` in a zero eigenvalue would otherwise shift the overlap by `~1e-9`.
pub fn log_fidelity(input: &[f64], abs_output: &[f64]) -> Result<f64> {
    let e = drop_null(input);
    let abs_output = &drop_null(abs_output)[..];
    let norm_out: f64 = abs_output.iter().sum();
    let norm_in: f64 = e.iter().sum();
    if !(norm_out > 0.0 && norm_in > 0.0) {
        return Err(MeasureError::DegenerateImage);
    }
    let overlap: f64 = e.iter().zip(abs_output).map(|(a, b)| (a * b).sqrt()).sum();
    finalize(-(overlap / (norm_in.sqrt() * norm_out.sqrt())).log2())
}

fn drop_null(values: &[f64]) -> Vec<f64> {
    let top = values.iter().fold(1.0_f64, |a, &v| a.max(v));
    let null = linalg::NULL_TOL * top;
    values
        .iter()
        .map(|&v| if v > null { v } else { 0.0 })
        .collect()
}

fn sorted_abs(values: &[f64]) -> Vec<f64> {
    let mut a: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    a
}

/// `D_R` or `D_L` for the given map.
///
/// Zero whenever `ρ` has a product eigenbasis; zero does not certify one.
pub fn measure_d(rho: &DensityMatrix, spec: &EnceMapSpec) -> Result<MeasureResult> {
    let s = spectra(rho, spec)?;
    let value = finalize(l1_spectral_distance(&s.input, &s.output))?;
    Ok(MeasureResult {
        measure: MeasureKind::D,
        map: MapLabel::Map(spec.kind()),
        side: spec.side().into(),
        value,
        spectrum_in: s.input,
        spectrum_out: s.output,
        spectrum_out_abs: None,
        components: Vec::new(),
    })
}

/// `Q_R` or `Q_L` for the given map.
pub fn measure_q(rho: &DensityMatrix, spec: &EnceMapSpec) -> Result<MeasureResult> {
    let s = spectra(rho, spec)?;
    let abs = sorted_abs(&s.output);
    let value = log_fidelity(&s.input, &abs)?;
    Ok(MeasureResult {
        measure: MeasureKind::Q,
        map: MapLabel::Map(spec.kind()),
        side: spec.side().into(),
        value,
        spectrum_in: s.input,
        spectrum_out: s.output,
        spectrum_out_abs: Some(abs),
        components: Vec::new(),
    })
}

/// `Q̃ = (Q_R + Q_L) / 2`.
pub fn measure_q_tilde(rho: &DensityMatrix, kind: MapKind) -> Result<MeasureResult> {
    let right = measure_q(rho, &EnceMapSpec::new(kind, Side::Right)?)?;
    let left = measure_q(rho, &EnceMapSpec::new(kind, Side::Left)?)?;
    let value = finalize(0.5 * (right.value + left.value))?;
    Ok(MeasureResult {
        measure: MeasureKind::QTilde,
        map: MapLabel::Map(kind),
        side: SideLabel::Average,
        value,
        spectrum_in: right.spectrum_in.clone(),
        spectrum_out: right.spectrum_out.clone(),
        spectrum_out_abs: right.spectrum_out_abs.clone(),
        components: vec![right, left],
    })
}

/// `Σ_k w_k Q̃(Λ_k, ρ)` with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMeasureSpec {
    pub terms: Vec<(MapKind, f64)>,
}

impl WeightedMeasureSpec {
    /// `w_T Q̃(Λ_T) + Σ_k w_k Q̃(P_{x_k})` from a transpose weight and
    /// `(x_k, w_k)` pairs.
    pub fn transpose_and_powers(transpose_weight: f64, powers: &[(f64, f64)]) -> Self {
        let mut terms = vec![(MapKind::Transpose, transpose_weight)];
        terms.extend(powers.iter().map(|&(x, w)| (MapKind::PowerMap(x), w)));
        Self { terms }
    }
}

pub fn weighted_measure(rho: &DensityMatrix, spec: &WeightedMeasureSpec) -> Result<MeasureResult> {
    if spec.terms.is_empty() {
        return Err(MeasureError::EmptySpec);
    }
    if let Some(&(_, w)) = spec
        .terms
        .iter()
        .find(|(_, w)| !(w.is_finite() && *w > 0.0))
    {
        return Err(MeasureError::BadWeight(w));
    }
    for &(kind, _) in &spec.terms {
        kind.validate()?;
    }
    let components = spec
        .terms
        .iter()
        .map(|&(kind, _)| measure_q_tilde(rho, kind))
        .collect::<Result<Vec<_>>>()?;
    let value = spec
        .terms
        .iter()
        .zip(&components)
        .map(|((_, w), c)| w * c.value)
        .sum();
    let spectrum_in = components[0].spectrum_in.clone();
    Ok(MeasureResult {
        measure: MeasureKind::Weighted,
        map: MapLabel::Weights(spec.terms.clone()),
        side: SideLabel::NotApplicable,
        value: finalize(value)?,
        spectrum_in,
        spectrum_out: Vec::new(),
        spectrum_out_abs: None,
        components,
    })
}
