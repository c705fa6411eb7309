//! Exact construction and analysis of recursive towers of curves over finite
//! fields built from a Singer-subgroup cover of the projective line.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod ffield;
pub mod projline;
pub mod report;
pub mod singer;
pub mod towergen;
pub mod unipoly;

pub use error::{Error, ErrorKind, Result};
pub use ffield::{Budget, Fe, FieldCtx, FieldInfo, FieldTower};
pub use unipoly::Poly;
