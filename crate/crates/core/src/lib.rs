//! Exact construction, verification, canonical forms and classification of
//! matrix solutions `(X, Y)` of `YX − γXY = I`, where `γ` is a primitive `l`-th
//! root of unity.
//!
//! Coefficients live in `F_p` (with `l | p − 1`) or in the cyclotomic field
//! `Q(ζ_l)`; all arithmetic is exact.

pub mod acceptance;
pub mod burnside;
pub mod families;
pub mod field;
pub mod json;
pub mod matrix;
pub mod oracle;
pub mod reduce;
pub mod sample;

pub use burnside::{elementary_in_monomials, generated_algebra, is_irreducible, ElementaryCombination, SubalgebraBasis};
pub use families::{NonsingularParams, SingularParams, Solution};
pub use field::{geometric_sum, FieldCtx, FieldElem, FieldError, FieldKind};
pub use matrix::{Mat, MatrixError};
pub use reduce::{are_equivalent, canonicalize, CanonicalForm, ConjugationWitness, ReduceError};
