//! Maximum likelihood estimation on toric models attached to the sixteen
//! reflexive lattice polygons.
//!
//! * [`lattice`]: polygons, reflexivity, singularities and the lifted matrices.
//! * [`model`]: toric models, data, the parametrization and likelihood.
//! * [`birch`]: numerical MLE by solving the moment equations.
//! * [`closedform`]: radical formulas for the cubic and quartic surfaces.
//! * [`mldegree`]: counting complex critical points of the likelihood.

pub mod birch;
pub mod closedform;
pub mod error;
pub mod intmat;
pub mod lattice;
pub mod mldegree;
pub mod model;
pub mod poly;

pub use error::{Error, Result};
pub use model::{DataVector, ProbabilityDistribution, ToricModel};
