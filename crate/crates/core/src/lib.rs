//! Heights of matrix sets over number fields, Borel covolumes of arithmetic
//! lattices in products of PGL2(R) and PGL2(C), generic-element search and
//! the strong Margulis-lemma scan.

pub mod algebraic;
pub mod arith;
pub mod error;
pub mod factor;
pub mod gaplab;
pub mod generic;
pub mod heights;
pub mod matrix;
pub mod mobius;
pub mod modp;
pub mod nfield;
pub mod poly;
pub mod qalg;
pub mod roots;

pub use error::{Error, Result};
