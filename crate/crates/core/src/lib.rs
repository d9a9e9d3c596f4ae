pub mod cli;
pub mod curve;
pub mod error;
pub mod harmonic;
pub mod mobius;
pub mod regularity;
pub mod seminorm;
pub mod zoo;

pub use curve::{ComplexPoint, CurveFunction, JordanCurve, Orientation};
pub use error::{Error, Result};
pub use mobius::{apply_mobius, invert_about, MobiusTransform};
