//! Exact and asymptotic statistics of Farey-fraction indices.

pub mod arith;
pub mod asympt;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod farey;
pub mod moments;

pub use arith::{BFreeKind, BFreeSpec, Constants, DirichletCharacter, SieveTables};
pub use error::{Error, Result};
pub use exact::ExactInt;
pub use farey::{FareyWindow, Fraction, IndexRecord};
