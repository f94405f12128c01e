//! Exact linear algebra over the rationals and prime fields, and
//! representations of outer automorphism groups.

pub mod field;
pub mod matrix;
pub mod module;

pub use field::{parse_rational, Field};
pub use matrix::{rank, Matrix};
pub use module::{act, cyclic_characters, load_module, named_module, trace_image_dim, FormalSum, KModule};
