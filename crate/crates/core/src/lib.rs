//! Numerical complex analysis for vector-valued holomorphic functions on
//! polydiscs in `C^d`.

pub mod analysis;
pub mod cauchy;
pub mod cli;
pub mod curve;
pub mod error;
pub mod estimate;
pub mod expr;
pub mod holomorphy;
pub mod multi_index;
pub mod point;
pub mod polydisc;
pub mod quadrature;
pub mod series;
pub mod space;

pub use curve::{CurveC1, CurveComponent};
pub use error::{Error, Result};
pub use estimate::{Estimate, Warning};
pub use multi_index::MultiIndex;
pub use num_complex::Complex64;
pub use point::CPoint;
pub use polydisc::{BoundaryGrid, Polydisc};
pub use quadrature::{FnIntegrand, Integrand};
pub use space::{Functional, Seminorm, Shape, SpaceDescriptor, VectorValue};
