//! Commutative presemifields from planar Dembowski-Ostrom polynomials over
//! odd-characteristic finite fields, their nuclei and isotopes, and a
//! code-based decision procedure for CCZ equivalence (strong isotopy).

#![allow(clippy::needless_range_loop)]

pub mod code;
pub mod error;
pub mod fmap;
pub mod gf;
pub mod linalg;
pub mod planar;
pub mod repro;
pub mod semifield;

pub use error::{Error, Result};
