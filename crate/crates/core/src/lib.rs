//! Numerics for probability measures on the unit circle: Poisson smoothing
//! (classical multiplicative convolution), free multiplicative convolution
//! with the free normal laws, complex transforms, and unimodality checks on
//! the resulting densities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angle;
pub mod classical;
pub mod density;
pub mod error;
pub mod free_normal;
pub mod io;
mod kernel;
pub mod measure;
pub mod quadrature;
pub mod spec;
pub mod transforms;
pub mod unimodality;

pub use angle::{normalize, Angle, Arc};
pub use classical::{convolve_grids, convolve_pk, pk_density, pk_grid, MuA};
pub use density::DensityGrid;
pub use error::{Error, Result};
pub use free_normal::{free_density, solve_v, VProfile};
pub use measure::{Atom, CircleMeasure, Piece};
pub use spec::{make_measure, AtomSpec, MeasureSpec, PieceSpec};
pub use transforms::ComplexPoint;
pub use unimodality::{is_unimodal, ReportRecord, UnimodalityReport, Verdict};
