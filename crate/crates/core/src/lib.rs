//! Computational toolkit for noncommutative domain algebras `A(D_f)`.
//!
//! A symbol `f = Σ a_α X_α` (positive coefficients, no constant term, every
//! generator present) determines weights `b_α`, weighted shifts `W_i` on the
//! full Fock space, and the matrix domains `D_f(C^k)`. The modules follow that
//! chain:
//!
//! - [`words`]: the free semigroup, graded-lex indexing and text syntax.
//! - [`symbol`]: symbols, validation, rescaling, permutation, commutative collapse.
//! - [`weights`]: the weight table and its composition-sum oracle.
//! - [`fock`]: truncated shifts, operator norms, defect, polynomial evaluation
//!   and the Poisson kernel.
//! - [`domains`]: membership of matrix tuples and scalar points, invariance checks.
//! - [`iso`]: Sunada matching, degree-`d` norm constraints and the obstruction search.
//! - [`selftest`]: the acceptance checks, shared by the CLI and the test suite.

pub mod domains;
mod error;
pub mod fock;
pub mod iso;
pub mod linalg;
pub mod sampling;
pub mod selftest;
pub mod symbol;
mod textfmt;
pub mod weights;
pub mod words;

pub use domains::{MatrixTuple, MembershipVerdict, Status};
pub use error::{Error, Result};
pub use fock::{PolyElement, ShiftOperators, TruncatedFock};
pub use num_complex::Complex64;
pub use symbol::{CollapsedPolynomial, Diagnostic, Symbol};
pub use textfmt::{format_complex, parse_complex};
pub use weights::WeightTable;
pub use words::{Alphabet, Multidegree, Word};
