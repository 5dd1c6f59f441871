pub mod arith;
pub mod artin_schreier;
pub mod bipoly;
pub mod cert;
pub mod constructors;
pub mod curve;
pub mod embed;
pub mod error;
pub mod field;
pub mod gauss;
pub mod linalg;
pub mod poly;
pub mod proj;
pub mod report;
pub mod sepgcd;
pub mod vspace;

pub use error::{Error, Result};
pub use field::{make_field, roots_of_unity, ArithOp, Elem, FieldElem, FieldSpec};
pub use poly::{Poly, RatFunc};
