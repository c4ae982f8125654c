//! Left-invariant Riemannian geometry of 3-dimensional Lie groups.
//!
//! * [`algebra`]: structure constants, catalog of the nine standard metric Lie algebras.
//! * [`bianchi`]: Bianchi types I–IX.
//! * [`geometry`]: Levi-Civita connection, Riemann and Ricci curvature.
//! * [`foliation`]: left-invariant conformal foliations by geodesics, i.e.
//!   local harmonic morphisms to surfaces.
//! * [`cli`]: the `lie3` command-line front end.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod bianchi;
pub mod cli;
pub mod error;
pub mod foliation;
pub mod format;
pub mod geometry;
pub mod random;

pub use algebra::{catalog, CatalogEntry, Group, MetricSpec, StructureConstants};
pub use bianchi::{classify, BianchiTag, BianchiType};
pub use error::{Error, Result};
pub use foliation::{search_directions, FoliationReport, SearchOptions};
pub use geometry::{connection, curvature, CurvatureReport};
