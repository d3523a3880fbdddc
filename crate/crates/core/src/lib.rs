//! Perron roots and Perron vectors of nonnegative Puiseux matrices.
//!
//! The pipeline has three layers:
//!
//! * [`tropical`] and [`wdigraph`] work on exact valuations: minimum cycle
//!   means, row-min scalings and the similarity translations that put the
//!   valuation graph into flat-slanted and gently-slanted form.
//! * [`eigen_expand`] deepens eigen-quadruples (approximate eigenvalue plus
//!   left and right quasi bases) one `t^{1/q}` step at a time.
//! * [`perron_driver`] alternates the two: it chooses the diagonal
//!   conjugation block by block and then expands the Perron pair to the
//!   requested depth.

mod dense;
pub mod eigen_expand;
pub mod perron_driver;
pub mod series_core;
pub mod tropical;
pub mod wdigraph;

pub use series_core::{Exponent, PuiseuxMatrix, PuiseuxSeries, Valuation};
