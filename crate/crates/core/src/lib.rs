//! Classification of unitary representations of circle-valued function
//! groups on finite ordered spaces.
//!
//! A finite-dimensional representation is described by a multiset of integer
//! weight vectors. This crate turns such a multiset into its canonical direct
//! sum of blocks `σ(κ, λ)`, validates and compares arbitrary presentations,
//! and computes the minimal reference measure. Around that core sit a
//! normal form for operators `Σ g_n·(f∘σ_n)` with the integrality criterion,
//! a numerical front-end that extracts weights from commuting unitary
//! matrices, and the Cantor-space variant at finite clopen depth.
//!
//! The exact side is generic over [`Weight`]; the aliases below fix the
//! exact rational instantiation used by the file formats and the CLI.

pub mod blocks;
pub mod cantor;
pub mod classifier;
pub mod error;
pub mod io;
pub mod kwapien;
pub mod measure;
pub mod presentation;
pub mod scalar;
pub mod space;
pub mod spectral;
pub mod weights;

pub use blocks::{Block, Signature};
pub use cantor::{DyadicMeasure, DyadicSpace};
pub use classifier::{ClassificationResult, Comparison, Mismatch};
pub use error::{Error, Result};
pub use kwapien::{HomomorphismMatrix, KwapienOperator, Term};
pub use measure::{Atom, AtomicMeasure};
pub use presentation::{Condition, Presentation, ValidationReport, Violation};
pub use scalar::Weight;
pub use space::OrderedSpace;
pub use spectral::{ToleranceConfig, UnitaryFamily};
pub use weights::{WeightMultiset, WeightVector};

pub use num_rational::BigRational;

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

pub type ExactMeasure = AtomicMeasure<Rational>;
pub type ExactBlock = Block<Rational>;
pub type ExactPresentation = Presentation<Rational>;
pub type ExactClassification = ClassificationResult<Rational>;
pub type ExactOperator = KwapienOperator<Rational>;

/// Floating-point instantiations, for callers who only need measure classes.
pub type FloatMeasure = AtomicMeasure<f64>;
pub type FloatPresentation = Presentation<f64>;

pub type UnitaryFamily64 = UnitaryFamily<f64>;
pub type UnitaryFamily32 = UnitaryFamily<f32>;
pub type Tolerances64 = ToleranceConfig<f64>;
