pub mod arith;
pub mod characters;
pub mod cuspidal;
pub mod error;
pub mod fields;
pub mod gamma_finite;
pub mod gamma_local;
pub mod gln;
pub mod level_zero;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
pub use fields::{FieldTower, FqElem, TowerOptions};
