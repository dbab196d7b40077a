//! Periodic truncation of the (x, t) plane, transforms with continuum measure
//! factors, dyadic shell indexing and the smooth time cutoff.

mod bump;
mod dyadic;
mod field;
mod grid;
mod transform;

pub use bump::{bump_window, bump_window_spectrum};
pub use dyadic::{bracket, dyadic_indices, shell_of, DyadicIndex, DyadicMap};
pub use field::{
    BandRow, BandedSpectrum, Representation, SpacetimeField, SpacetimeRepr, SpatialField,
    SpectralRows, SpectrumField,
};
pub use grid::GridSpec;
pub use transform::{Direction, Transformer};
