//! Exact verification engine for left-invariant almost-Hermitian structures
//! on Lie algebras: connections, curvature, Gray identities, and the
//! quasi-Kähler theorems about vanishing Hermitian curvature.
//!
//! All arithmetic is over arbitrary-precision rationals and Gaussian
//! rationals, so every identity is checked as an exact equality.

pub mod analysis;
pub mod connection;
pub mod curvature;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod hermitian;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod sampler;
pub mod scalar;
pub mod tensor;
pub mod theorems;

pub use connection::{canonical_connection, levi_civita, Connection, ConnectionFlavor, Field};
pub use error::{Error, Result};
pub use forms::InvariantForm;
pub use hermitian::{
    classify, metric_from_taming, AlmostComplexStructure, Classification, ComplexFrame, HermitianTriple,
    InvariantMetric, Variance,
};
pub use lie::{FrameChange, LieAlgebra};
pub use scalar::{GaussianRational, Rational, Scalar};
pub use tensor::{ComplexTensor, IndexKind, RealTensor, Tensor};
