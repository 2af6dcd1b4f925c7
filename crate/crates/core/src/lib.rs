//! Moduli spaces of planar quadrilateral linkages and robot 3-arms, and the
//! geometry of their cross-ratio maps.
//!
//! * [`geom`]: cross-ratio, uniformizer, angles and signed area of four points.
//! * [`quad`]: closed four-bars: topology, image arcs, fibers, folds, degree.
//! * [`arm`]: open 3-arms: torus chart, Jacobian, fold curves, t-slices, annulus.

pub mod arc;
pub mod arm;
pub mod error;
pub mod geom;
pub mod quad;

pub use arc::CircleArc;
pub use arm::{ArmCase, ArmLinkage, TorusPoint};
pub use error::{LinkageError, Result};
pub use geom::{ExtendedComplex, PlanarConfig};
pub use quad::{ModuliPoint, ModuliTopology, QuadLinkage};
pub use num_complex::Complex64;
