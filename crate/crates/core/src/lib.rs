pub mod borelcantelli;
pub mod error;
pub mod experiments;
pub mod ifs;
pub mod ifs_text;
pub mod lattice;
pub mod matrix;
pub mod point;
pub mod rational;
pub mod sarith;
pub mod spectral;
pub mod transform;

pub use error::{Error, Result};
pub use ifs::{PrefixSet, RationalIfs, SimilarityMap, Word};
pub use lattice::{NormSpec, UnimodularLattice};
pub use matrix::RationalMatrix;
pub use point::RatPoint;
pub use rational::Rational;
pub use transform::{ApproxFunction, DynamicalProfile};
