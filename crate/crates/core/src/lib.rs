//! Singular minimal translation surfaces under semi-symmetric connections.
//!
//! The crate builds translation surfaces `z = f(x) + g(y)`, `y = f(x) + g(z)`
//! and `x = f(y) + g(z)` from closed-form, ODE-integrated or
//! quadrature-defined profiles, computes their mean curvature for the
//! Levi-Civita connection and two semi-symmetric connections, and checks the
//! singular-minimality equation `2H = α <ξ, u> / <σ, u>` pointwise.

pub mod cli;
pub mod connection;
pub mod error;
pub mod jets;
pub mod singular;
pub mod solutions;
pub mod surface;

pub use connection::{mean_curvature, mean_curvature_closed_form, ConnectionKind, CurvatureReport};
pub use error::{Error, Result};
pub use jets::{fd_jet, Analytic, Interval, ProfileFn, ScalarJet};
pub use singular::{surface_residual, Axis, ResidualReport, SingularConfig};
pub use solutions::{Family, Solution, SolutionSpec};
pub use surface::{make_mesh, surface_jet, Rect, SurfaceJet, SurfaceType, TranslationSurface, Vec3};
