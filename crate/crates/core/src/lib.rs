//! Restricted Radon-type transforms on Euclidean space, the sphere and the
//! hyperboloid: forward transforms over admissible plane families, inversion,
//! range tests and the integral identities behind them.

pub mod error;
pub mod euclid;
pub mod funk;
pub mod hyperbolic;
pub mod io;
pub mod range;
pub mod numkit;
pub mod rotation;

pub use error::{Error, ErrorKind, Result};
