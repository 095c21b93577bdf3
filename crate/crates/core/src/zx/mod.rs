//! ZX-diagram data model, circuit ingestion, boundary plugging and the
//! brute-force oracle.

mod circuit;
pub mod dense;
mod diagram;
pub mod io;
pub mod oracle;
mod phase;
mod plug;
mod scalar;

pub use circuit::{Circuit, Gate};
pub use diagram::{EdgeKind, VertexKind, ZxDiagram, V};
pub use oracle::{oracle_scalar, oracle_tensor};
pub use phase::{unit_eighth, Phase};
pub use plug::{plug_phase_states, plug_states, plug_t_states};
pub use scalar::Scalar;

/// Parses a bitstring such as `"0110"`; character `k` is qubit `k`.
pub fn parse_bits(s: &str) -> crate::error::Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(crate::error::Error::Parse {
                line: 0,
                msg: format!("bad bit {c:?} in {s:?}"),
            }),
        })
        .collect()
}
