//! Spectra of weighted composition operators on the disc algebra, the
//! polydisc algebra and `C(𝕋)`.

pub mod blaschke;
pub mod circle;
pub mod cocycle;
pub mod document;
pub mod error;
pub mod moebius;
pub mod plot;
pub mod polydisc;
pub mod quadrature;
pub mod region;
pub mod roots;
pub mod spectra;
pub mod weight;

pub use error::{Error, Result};
