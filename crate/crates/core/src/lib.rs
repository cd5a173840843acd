//! Construction, verification, encoding and decoding of quantum codes given
//! by Fourier descriptions over abelian subgroups of the Weyl error group.

pub mod circuits;
pub mod decoder;
pub mod encodable;
pub mod error;
pub mod families;
pub mod fourier_code;
pub mod galois;
pub mod gottesman;
pub mod limits;
pub mod oracle;
pub mod weyl;

pub use error::{Error, Result};
pub use limits::Limits;
