pub mod bench;
pub mod contract;
pub mod error;
pub mod f2linalg;
pub mod gflow;
pub mod pipeline;
pub mod rankdecomp;
pub mod simplify;
pub mod zx;

pub use error::{Error, Result};
pub use f2linalg::BitMatrix;
pub use zx::{Circuit, Gate, Phase, Scalar, ZxDiagram};
