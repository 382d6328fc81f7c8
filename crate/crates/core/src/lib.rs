//! Curve/point-set matching under the Fréchet distance.
//!
//! * [`geom`]: planar kernel (balls, cylinders, free-space cells).
//! * [`frechet`]: continuous and discrete Fréchet distance between curves.
//! * [`cpsm`]: matching a curve to a precise point set, including the
//!   reachability-table subset algorithm and brute-force oracles.
//! * [`allpoints`]: restricted all-points matching and its 3-approximation.
//! * [`imprecise`]: segment-shaped imprecise points and an exact solver for
//!   the discrete non-unique variants.
//! * [`reductions`]: (3,B2)-SAT tooling and hardness-gadget generators.
//! * [`io`] and [`svg`]: instance files and figure rendering.

pub mod allpoints;
pub mod cpsm;
pub mod error;
pub mod frechet;
pub mod geom;
pub mod imprecise;
pub mod io;
pub mod optimize;
pub mod reductions;
pub mod svg;

pub use error::{Error, Result};
pub use frechet::{Coupling, Curve};
pub use geom::{ParamInterval, Point, Segment};
