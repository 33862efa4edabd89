//! Exact rational geometry for self-similar sets: strong separation,
//! chains, self-embedding certificates, openness of embedded copies, and
//! symmetry of attractors on the line.

pub mod bounds;
pub mod chains;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod example25;
pub mod figure;
pub mod fixtures;
pub mod geometry;
pub mod ifs;
pub mod io;
pub mod orth;
pub mod rational;
pub mod report;
pub mod similitude;
pub mod ssc;
pub mod symmetry;

pub use error::{Error, Result};
pub use geometry::{AxisBox, RationalVector};
pub use ifs::{Ifs, Word};
pub use orth::SignedPermutation;
pub use rational::Rational;
pub use similitude::Similitude;
