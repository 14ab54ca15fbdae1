//! Exact computations with finite augmented algebras, their comultiplications
//! and module categories over finite fields.

pub mod algebra;
pub mod error;
pub mod field;
pub mod hom;
pub mod heisenberg;
pub mod hopf;
pub mod klein;
pub mod matrix;
pub mod module;
pub mod pipoint;
pub mod wild;

pub use algebra::{invert_morphism, Algebra, Element, Morphism, Relation};
pub use error::{Error, Result};
pub use hopf::Comultiplication;
pub use field::{Elem, Field, FieldSpec};
pub use module::Representation;
pub use matrix::{JordanType, Matrix, RowSpace};
