//! Hybrid spherical designs: finite reflection groups, polytope vertex sets,
//! Eulerian geodesic cycles, curve and point cubature, and the balancing
//! factors that combine them into exact quadratures on the sphere.

pub mod cycles;
pub mod error;
pub mod hybrid;
pub mod invariants;
pub mod linalg;
pub mod orthogroup;
pub mod poly;
pub mod polytope;
pub mod quad;

pub use cycles::{ClosedCurve, GeodesicArc, GeodesicCycle, LatitudeCircle};
pub use error::{Error, Result};
pub use hybrid::{build_hybrid, HybridDesign, SweepPolicy};
pub use linalg::UnitPoint;
pub use orthogroup::{named_group, FiniteOrthGroup, GroupName};
pub use poly::{MultiPoly, SphereFunction};
pub use polytope::{build_polytope, catalog, lookup, Polytope, PolytopeSpec};
pub use quad::{certify_design, CertReport, Curve};
