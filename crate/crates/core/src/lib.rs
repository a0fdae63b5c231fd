//! Numerical toolkit for embeddings of rearrangement-invariant Sobolev spaces
//! into Morrey and Campanato spaces.
//!
//! Functions live on the representation interval (0,1). Norms are evaluated on
//! step functions and on power kernels `s^γ χ_(lo,hi)`, the objects appearing in
//! the embedding criteria.

pub mod asymptotics;
pub mod criteria;
pub mod error;
pub mod grid;
pub mod norms;
pub mod quad;
pub mod solve;
pub mod step;
pub mod weight;
pub mod witnesses;
pub mod young;

pub use error::{Error, Result};
pub use grid::Grid;
pub use norms::RiSpace;
pub use step::{rearrange, PowerPiece, StepFunction};
pub use weight::Weight;
pub use young::YoungFunction;
