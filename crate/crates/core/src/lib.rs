//! Numerical toolkit for finite Gabor systems: time-frequency configurations,
//! sampled windows and their Gram matrices, the discrete Zak transform, torus
//! rotations and orbit products, rational relation detection, and diagonal
//! flows for `(1,N)`-configurations.

pub mod error;
pub mod exact;
pub mod flow;
pub mod linalg;
mod lll;
pub mod operators;
pub mod relations;
pub mod roots;
pub mod sum;
pub mod tf;
pub mod torus;
pub mod zak;

pub use error::{Error, Result};
pub use exact::{QuadSurd, Rational, Real};
pub use tf::{
    classify_configuration, make_window, normalize_configuration, CoefficientVector, ConfigClass,
    Configuration, SampledWindow, TFPoint, WindowKind,
};
