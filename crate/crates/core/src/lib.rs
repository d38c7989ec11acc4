//! Gyrogroup models, their step-function extension, and a verification
//! engine for axioms, identities, and neighborhood-base conditions.

pub mod checks;
pub mod element;
pub mod error;
pub mod hm;
pub mod model;
pub mod models;
pub mod rational;
pub mod report;
pub mod rng;

pub use element::{Element, ElementValue, ModelId};
pub use error::{GyroError, Result};
pub use model::{Carrier, DynModel, GyroModel};
pub use rational::Rational;
