//! Exact truncated computations with symmetric sequences, symmetric graded
//! algebras, their modules, Σ-ideals and the associated spectral space.

pub mod algebra;
pub mod emod;
pub mod error;
pub mod ideal;
pub mod linalg;
pub mod projtop;
pub mod rep;
pub mod report;
pub mod scalars;
pub mod sgroup;
pub mod suites;
pub mod symseq;

pub use error::{Error, Result};
pub use linalg::{Echelon, Matrix, SparseVec, Subspace};
pub use scalars::{Field, FieldTag, Fp, Rational};

pub type QMatrix = Matrix<Rational>;
pub type QSymSeq = symseq::SymSeq<Rational>;
pub type QAlgebra = algebra::SymAlgebra<Rational>;
pub type QModule = emod::EModule<Rational>;
pub type QGradedModule = emod::GradedModule<Rational>;
pub type QIdeal = ideal::SigmaIdeal<Rational>;

/// 𝔽_p counterparts; the CLI uses these for `--field Fp:<p>`.
pub type FpAlgebra<const P: u64> = algebra::SymAlgebra<Fp<P>>;
pub type FpModule<const P: u64> = emod::EModule<Fp<P>>;
pub type FpIdeal<const P: u64> = ideal::SigmaIdeal<Fp<P>>;
