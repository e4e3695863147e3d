//! Computational toolkit for the metaplectic modular categories SO(m)_2.
//!
//! * [`fusion`]: labels, fusion rules, dimensions, twists and R-symbols.
//! * [`braid`]: braid words with trace and plat closures and their linking
//!   matrices.
//! * [`dense`]: dense R-matrices and braid representations; the brute-force
//!   oracle for the structured simulators.
//! * [`heisenberg`]: polynomial-time Heisenberg-picture simulation of the
//!   `Xe` qudit representation with stabilizer tableaus and measurement.
//! * [`group`]: exact polynomial-space simulation of the `Y_1` qubit
//!   representation as elements of an abelian-by-Clifford group.
//! * [`invariants`]: the sublink state sum, Seifert matrices of braid
//!   closures and quadratic Gauss sums.
//! * [`ising`]: Ising partition functions, the coupling-to-link compiler and
//!   max-cut recovery.
//!
//! Dense numerics are generic over [`Real`]; the aliases below fix the usual
//! choices.

pub mod arith;
pub mod braid;
pub mod cyclotomic;
pub mod dense;
pub mod error;
pub mod fusion;
pub mod group;
pub mod heisenberg;
pub mod invariants;
pub mod ising;
pub mod pauli;
pub mod scalar;

pub use braid::{BraidWord, ClosureKind, LinkingMatrix};
pub use cyclotomic::CyclotomicValue;
pub use dense::{DenseOperator, RMatrixKind};
pub use error::{Error, Result};
pub use fusion::{FusionRing, Label};
pub use group::GroupElement;
pub use heisenberg::{QuditMonomial, StabilizerTableau};
pub use scalar::{Real, Weight};

/// Double-precision dense operator, the default for oracle checks.
pub type DenseOperatorF64 = dense::DenseOperator<f64>;
/// Single-precision dense operator.
pub type DenseOperatorF32 = dense::DenseOperator<f32>;
/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Complex double.
pub type C64 = num_complex::Complex<f64>;
