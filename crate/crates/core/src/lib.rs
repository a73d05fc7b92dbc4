//! Geometry, harmonic analysis and random walks on the hyperbolic plane and
//! its congruence quotients.
//!
//! The crate is organized bottom-up:
//!
//! - [`geometry`]: points, Möbius maps, distance, circles, area sampling.
//! - [`modular`]: PSL2(Z), reduction to the fundamental domain, the covers
//!   `X_q`, quotient distances and random covers of the level-2 lattice.
//! - [`spectral`]: spherical functions, operator-norm bounds, radial
//!   mixture laws, the heat kernel and radial Helgason transforms.
//! - [`walk`]: the step walk and Brownian motion, with CLT and tail checks.
//! - [`mixing`]: total-variation profiles, cutoff location, distance
//!   histograms, concentration fits and the isoperimetric check.
//! - [`density`]: eigenvalue budgets and cover-family requirements.
//! - [`torus`]: the flat-torus heat kernel, used as a no-cutoff contrast.
//! - [`cli`]: the experiment harness behind the `hypercut` binary.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod density;
pub mod error;
pub mod geometry;
pub mod mixing;
pub mod modular;
pub mod quad;
pub mod radial;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod torus;
pub mod walk;

pub use error::{Error, Result};
pub use geometry::{distance, MobiusReal, PointH};
pub use radial::RadialGrid;
