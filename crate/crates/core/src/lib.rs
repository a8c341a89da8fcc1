//! Computational toolkit for small-dilatation pseudo-Anosov constructions.
//!
//! * [`matrix`] and [`spectral`]: exact integer matrices, primitivity and
//!   Perron-Frobenius eigenvalues with certified row-sum brackets.
//! * [`penner`]: curve systems, twist words and their transition matrices.
//! * [`graph`]: directed multigraphs, path counting, girth, the layered
//!   path-count lemma and the quotient graph family `Γ̄(n, k)`.
//! * [`numtheory`]: Jacobsthal function, coprime sequences, CRT power.
//! * [`bounds`]: upper/lower bounds on the minimal entropy and tables.
//! * [`verify`]: the full invariant grid with a deterministic report.
//!
//! Real-valued routines are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

pub mod bounds;
pub mod graph;
pub mod matrix;
pub mod numtheory;
pub mod penner;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use graph::{DiGraph, GammaBar, LayeredPartition};
pub use matrix::{mat_pow, IntMatrix};
pub use penner::{CurveSystem, MappingClassWord, Side, Step};
pub use scalar::Real;
pub use spectral::{SpectralBracket, SpectralError};

pub type Bracket = spectral::SpectralBracket<f64>;
pub type Bracket32 = spectral::SpectralBracket<f32>;
pub type BoundRecord = bounds::BoundRecord<f64>;
pub type BoundParams = bounds::BoundParams<f64>;
pub type CoprimeSequence = numtheory::CoprimeSequence<f64>;
pub type LayeredBound = graph::LayeredBound<f64>;
