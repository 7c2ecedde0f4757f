//! Detection and quantification of nonclassical correlation in
//! finite-dimensional bipartite and multipartite quantum states.
//!
//! A state is classically correlated when it has a product eigenbasis. Maps
//! that preserve eigenvalues but whose one-sided extensions do not
//! (partial transpose and the power-map family `P_x`) leave the spectrum of
//! such states unchanged, so any change of spectrum witnesses nonclassical
//! correlation. The `measures` module turns that change into numbers.

pub mod cli;
pub mod linalg;
pub mod maps;
pub mod measures;
pub mod multipartite;
pub mod states;

pub use linalg::{ComplexMatrix, Spectrum};
pub use maps::{EnceMapSpec, MapKind, Side};
pub use measures::{MeasureKind, MeasureResult, WeightedMeasureSpec};
pub use multipartite::{Aggregator, PEVerdict, PeStatus, SplittingSpec};
pub use states::{DensityMatrix, NamedStateSpec};
