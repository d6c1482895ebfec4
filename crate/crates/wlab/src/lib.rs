//! wlab: minimal surfaces in the unit ball from Weierstrass data.
//!
//! The crate constructs minimal immersion charts from a Gauss map, checks
//! the free-boundary conditions against the unit sphere, fits boundary
//! curves as planar circles, and replays the boundary-constraint
//! derivation on truncated series to certify that free boundary minimal
//! surfaces meet the sphere in planar circles.

pub mod jets;
pub mod quad;
pub mod weierstrass;

pub use jets::{Complex, ComplexJet};
pub use weierstrass::{Chart, SurfacePoint, WeierstrassData};
