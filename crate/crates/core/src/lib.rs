//! Network and submodular representability of cost functions over finite
//! domains under `(k, rho, sigma)` encodings, with exact rational
//! arithmetic and machine-checkable certificates.

pub mod bits;
pub mod cli;
pub mod cone;
pub mod costfn;
pub mod encoding;
pub mod error;
pub mod lattice;
pub mod network;
pub mod rational;
pub mod rep_lp;
pub mod ratlp;
pub mod wpol;

pub use bits::Bits;
pub use costfn::{CostFunction, Property};
pub use encoding::Encoding;
pub use error::{Error, Result};
pub use lattice::{LatticeFamily, Point};
pub use network::{Edge, Network};
pub use rational::{ExtRat, Rational};
pub use ratlp::{FarkasCertificate, FeasResult, LinSystem};
pub use wpol::{OperationTable, WeightedPolymorphism};
