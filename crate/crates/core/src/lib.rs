//! Elementary quantum tori with graded involution: normal forms, involution
//! types, semilattice invariants and type-C extended affine root systems,
//! computed exactly and cross-checked against brute-force oracles.

pub mod error;
pub mod gf2;
pub mod involution;
pub mod normal_form;
pub mod oracle;
pub mod roots;
pub mod semilattice;
pub mod torus;
pub mod unimodular;
pub mod verify;

pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Gf2Vector, Subspace};
pub use unimodular::{ColumnOp, IntUnimodularMatrix};
